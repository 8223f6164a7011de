"""Command-line driver.

Examples::

    burgers1d --case example1 --spatial supg --temporal r22 --t-out 1.0
    burgers1d --table table2 --output-dir out/table2
    burgers1d --table custom --case example2 --spatial mefg,supg --temporal r22 \\
        --m 3000 --t-out 0.05
"""
import argparse
import logging
import sys

from .errors import ConfigurationError, DivergenceError, SolverFailure
from .runner import (RunConfig, TableSpec, emit_profiles, ensure_writable, parse_bool,
                     preset_table, read_config_file, report_rows, run_single, run_table,
                     rows_to_csv, write_csv)

log = logging.getLogger("burgers1d")

EXIT_OK, EXIT_CONFIG, EXIT_DIVERGED, EXIT_SOLVER = 0, 2, 3, 4

_KEYS = ("case", "spatial", "temporal", "m", "dt", "t_out", "re", "norm_mode", "jobs",
         "output_dir", "table", "supg_mass_perturbation", "linearization_mode", "profile")


def build_parser():
    p = argparse.ArgumentParser(
        prog="burgers1d",
        description="Pade-in-time / finite-element-in-space solvers for the 1D Burgers equation.",
    )
    p.add_argument("--config", help="flat key = value file; command-line flags override it")
    p.add_argument("--case", help="example1 or example2")
    p.add_argument("--spatial", help="mefmq, mefg or supg (comma list with --table custom)")
    p.add_argument("--temporal", help="r11 or r22 (comma list with --table custom)")
    p.add_argument("--m", help="element count (comma list with --table custom)")
    p.add_argument("--dt", help="time step")
    p.add_argument("--t-out", dest="t_out", help="comma-separated output times")
    p.add_argument("--re", help="Reynolds number, eps = 1/Re")
    p.add_argument("--norm-mode", dest="norm_mode", help="quadrature (default) or nodal")
    p.add_argument("--supg-mass-perturbation", dest="supg_mass_perturbation",
                   help="on/off: apply the SUPG test perturbation to the time derivative")
    p.add_argument("--linearization-mode", dest="linearization_mode",
                   help="element_mean (default) or upwind_node")
    p.add_argument("--profile", help="example2 orientation: shock (default) or printed")
    p.add_argument("--jobs", help="parallel runs for tables (default 1)")
    p.add_argument("--output-dir", dest="output_dir", help="directory for results.csv and profiles/")
    p.add_argument("--table", help="table2, table3 or custom")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def _merge(args):
    values = read_config_file(args.config) if args.config else {}
    for key in _KEYS:
        v = getattr(args, key)
        if v is not None:
            values[key] = v
    unknown = set(values) - set(_KEYS)
    if unknown:
        raise ConfigurationError(f"unknown configuration keys: {sorted(unknown)}")
    return values


def _split(text, conv=str):
    return tuple(conv(s.strip()) for s in str(text).split(",") if s.strip())


def _options(values):
    opts = {}
    if "norm_mode" in values:
        opts["norm_mode"] = values["norm_mode"]
    if "supg_mass_perturbation" in values:
        opts["supg_mass_perturbation"] = parse_bool(values["supg_mass_perturbation"])
    if "linearization_mode" in values:
        opts["linearization_mode"] = values["linearization_mode"]
    if "profile" in values:
        opts["profile"] = values["profile"]
    return opts


def _num(conv, text, what):
    try:
        return conv(text)
    except ValueError:
        raise ConfigurationError(f"invalid {what}: {text!r}") from None


def table_from_values(values):
    table = values["table"]
    opts = _options(values)
    if table in ("table2", "table3"):
        return preset_table(table, **opts)
    if table != "custom":
        raise ConfigurationError(f"--table must be table2, table3 or custom, got {table!r}")
    case = values.get("case", "example1")
    probe = RunConfig(case=case, **{k: v for k, v in opts.items() if k == "profile"})
    return TableSpec(
        case=case,
        spatial=_split(values.get("spatial", "mefmq,mefg,supg")),
        temporal=_split(values.get("temporal", "r11,r22")),
        m=_split(values["m"], lambda s: _num(int, s, "m")) if "m" in values else (probe.m,),
        t_out=_split(values["t_out"], lambda s: _num(float, s, "t_out")) if "t_out" in values else probe.t_out,
        dt=_num(float, values["dt"], "dt") if "dt" in values else None,
        Re=_num(float, values["re"], "Re") if "re" in values else None,
        options=opts,
    )


def config_from_values(values):
    kw = _options(values)
    for key in ("case", "spatial", "temporal"):
        if key in values:
            kw[key] = values[key]
    if "m" in values:
        kw["m"] = _num(int, values["m"], "m")
    if "dt" in values:
        kw["dt"] = _num(float, values["dt"], "dt")
    if "re" in values:
        kw["Re"] = _num(float, values["re"], "Re")
    if "t_out" in values:
        kw["t_out"] = _split(values["t_out"], lambda s: _num(float, s, "t_out"))
    kw["output_dir"] = values.get("output_dir", "results")
    return RunConfig(**kw)


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        values = _merge(args)
        out_dir = values.get("output_dir", "results")
        jobs = _num(int, values.get("jobs", 1), "jobs")
        if "table" in values:
            spec = table_from_values(values)
            configs = spec.configs()
        else:
            configs = [config_from_values(values)]
    except (ConfigurationError, OSError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        out = ensure_writable(out_dir)
    except OSError as exc:
        print(f"cannot write to output directory {out_dir!r}: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    if "table" in values:
        rows, results = run_table(configs, jobs=jobs)
        for res in results:
            emit_profiles(res, out)
        write_csv(rows, out / "results.csv")
        failed = sum(1 for r in rows if r["error"])
        print(f"wrote {len(rows)} rows ({failed} failed) to {out / 'results.csv'}")
        return EXIT_OK

    cfg = configs[0]
    try:
        result = run_single(cfg)
    except DivergenceError as exc:
        print(f"diverged: {exc}", file=sys.stderr)
        return EXIT_DIVERGED
    except SolverFailure as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    rows = report_rows(result)
    write_csv(rows, out / "results.csv")
    emit_profiles(result, out)
    sys.stdout.write(rows_to_csv(rows))
    print(f"overshoot {result.overshoot:.6g}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
