"""Single runs, run matrices, CSV tables and solution profiles."""
import csv
import io
import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .assembly import LINEARIZATION_MODES
from .benchmarks import get_case, initial_field
from .errors import BurgersError, ConfigurationError
from .mesh import build_uniform_mesh
from .norms import NORM_MODES, compute_errors
from .pade import make_scheme
from .stepping import SPATIAL_METHODS, StepperContext, integrate

TEMPORAL_METHODS = ("r11", "r22")

CSV_COLUMNS = ("formulation", "integrator", "m", "dt", "Re", "t",
               "l2", "linf", "log10_l2", "log10_linf", "error")


@dataclass(frozen=True)
class RunConfig:
    case: str = "example1"
    spatial: str = "mefg"
    temporal: str = "r11"
    m: int = None
    dt: float = None
    t_out: tuple = None
    Re: float = None
    norm_mode: str = "quadrature"
    supg_mass_perturbation: bool = True
    linearization_mode: str = "element_mean"
    profile: str = "shock"
    output_dir: str = "results"

    def __post_init__(self):
        case = get_case(self.case, profile=self.profile)
        set_ = lambda k, v: object.__setattr__(self, k, v)
        set_("spatial", str(self.spatial).lower())
        set_("temporal", str(self.temporal).lower())
        if self.m is None:
            set_("m", case.m)
        if self.dt is None:
            set_("dt", case.dt)
        if self.t_out is None:
            set_("t_out", case.t_out)
        if self.Re is None:
            set_("Re", case.Re)
        set_("m", int(self.m))
        set_("dt", float(self.dt))
        set_("Re", float(self.Re))
        set_("t_out", tuple(float(t) for t in np.atleast_1d(self.t_out)))
        self.validate()

    def validate(self):
        if self.spatial not in SPATIAL_METHODS:
            raise ConfigurationError(f"spatial must be one of {SPATIAL_METHODS}, got {self.spatial!r}")
        if self.temporal not in TEMPORAL_METHODS:
            raise ConfigurationError(f"temporal must be one of {TEMPORAL_METHODS}, got {self.temporal!r}")
        if self.norm_mode not in NORM_MODES:
            raise ConfigurationError(f"norm_mode must be one of {NORM_MODES}, got {self.norm_mode!r}")
        if self.linearization_mode not in LINEARIZATION_MODES:
            raise ConfigurationError(f"unknown linearization_mode {self.linearization_mode!r}")
        if not self.Re > 0:
            raise ConfigurationError(f"Re must be positive, got {self.Re}")
        if self.m < 2:
            raise ConfigurationError(f"m must be at least 2, got {self.m}")
        if not self.dt > 0:
            raise ConfigurationError(f"dt must be positive, got {self.dt}")
        for t in self.t_out:
            if t < 0:
                raise ConfigurationError(f"output time {t} is negative")
            k = t / self.dt
            if abs(k - round(k)) > 1e-9 * max(1.0, k):
                raise ConfigurationError(f"output time {t} is not an integer multiple of dt={self.dt}")

    @property
    def output_steps(self):
        return tuple(int(round(t / self.dt)) for t in self.t_out)

    @property
    def formulation(self):
        return f"{self.spatial.upper()}+{self.temporal.upper()}"

    def benchmark(self):
        return get_case(self.case, Re=self.Re, profile=self.profile)


@dataclass
class Profile:
    t: float
    x: np.ndarray
    u: np.ndarray
    exact: np.ndarray


@dataclass
class RunResult:
    config: RunConfig
    reports: list
    profiles: list
    overshoot: float = 0.0


def run_single(config):
    """Integrate one configuration and evaluate errors at every output time."""
    case = config.benchmark()
    mesh = build_uniform_mesh(case.a, case.b, config.m)
    ctx = StepperContext(
        mesh=mesh, eps=case.eps, spatial=config.spatial,
        linearization_mode=config.linearization_mode,
        supg_mass_perturbation=config.supg_mass_perturbation,
    )
    state = initial_field(case, mesh, with_derivative=ctx.needs_derivative)
    states = integrate(make_scheme(config.temporal), state, ctx, config.dt, config.output_steps)
    reports, profiles = [], []
    overshoot = 0.0
    for t, step in zip(config.t_out, config.output_steps):
        u = states[step]
        reports.append(compute_errors(mesh, u, case.exact, t, config.norm_mode,
                                      config.formulation, config.dt, config.Re))
        exact = case.exact(mesh.nodes, t)
        profiles.append(Profile(t, mesh.nodes.copy(), u.u.copy(), exact))
        # excursion of the numerical profile beyond the range of the exact one
        overshoot = max(overshoot, float(u.u.max() - exact.max()), float(exact.min() - u.u.min()))
    return RunResult(config, reports, profiles, max(overshoot, 0.0))


# -- matrices ------------------------------------------------------------------

@dataclass(frozen=True)
class TableSpec:
    """Cross product ``spatial x temporal x m`` for one case; each run covers ``t_out``."""

    case: str
    spatial: tuple = SPATIAL_METHODS
    temporal: tuple = TEMPORAL_METHODS
    m: tuple = ()
    t_out: tuple = ()
    dt: float = None
    Re: float = None
    options: dict = field(default_factory=dict)

    def configs(self):
        return [
            RunConfig(case=self.case, spatial=s, temporal=r, m=m, dt=self.dt,
                      t_out=self.t_out, Re=self.Re, **self.options)
            for s, r, m in itertools.product(self.spatial, self.temporal, self.m)
        ]

    @property
    def n_rows(self):
        return len(self.spatial) * len(self.temporal) * len(self.m) * len(self.t_out)


def preset_table(name, **options):
    """Named run matrices: ``table2`` (example1) and ``table3`` (example2)."""
    if name == "table2":
        return TableSpec("example1", m=(50, 1000), t_out=(0.5, 1.0), dt=0.5, Re=1e5,
                         options=options)
    if name == "table3":
        return TableSpec("example2", m=(3000, 4000), t_out=(0.05, 0.1), dt=0.05 / 152,
                         Re=1e4, options=options)
    raise ConfigurationError(f"unknown table preset {name!r}")


def _run_for_table(config):
    try:
        return run_single(config), None
    except BurgersError as exc:
        return None, f"{type(exc).__name__}: {exc}"


def run_table(spec, jobs=1):
    """Run every configuration of ``spec``; returns ``(rows, results)``.

    Failures become rows carrying an ``error`` message. Row order follows the
    matrix iteration order regardless of ``jobs``.
    """
    configs = spec.configs() if isinstance(spec, TableSpec) else list(spec)
    if jobs and jobs > 1 and len(configs) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(_run_for_table, configs))
    else:
        outcomes = [_run_for_table(c) for c in configs]
    rows, results = [], []
    for cfg, (res, err) in zip(configs, outcomes):
        if res is None:
            for t in cfg.t_out:
                rows.append(_row(cfg, t, None, err))
            continue
        results.append(res)
        rows.extend(report_rows(res))
    return rows, results


def report_rows(result):
    """CSV rows for every output time of one successful run."""
    return [_row(result.config, rep.t, rep, "") for rep in result.reports]


def _fmt(v, digits=17):
    if v is None:
        return ""
    if isinstance(v, float) and math.isinf(v):
        return "-inf" if v < 0 else "inf"
    return f"{v:.{digits}g}"


def _fmt_log(v):
    return _fmt(v) if math.isinf(v) else f"{v:.6f}"


def _row(cfg, t, rep, err):
    return {
        "formulation": cfg.spatial.upper(),
        "integrator": cfg.temporal.upper(),
        "m": str(cfg.m),
        "dt": _fmt(cfg.dt),
        "Re": _fmt(cfg.Re),
        "t": _fmt(float(t)),
        "l2": _fmt(rep.l2) if rep else "",
        "linf": _fmt(rep.linf) if rep else "",
        "log10_l2": _fmt_log(rep.log10_l2) if rep else "",
        "log10_linf": _fmt_log(rep.log10_linf) if rep else "",
        "error": err or "",
    }


def rows_to_csv(rows):
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def write_csv(rows, path):
    Path(path).write_text(rows_to_csv(rows))


# -- profiles ------------------------------------------------------------------

def ensure_writable(directory):
    """Create ``directory`` if needed and fail early (OSError) if it is not writable."""
    path = Path(directory)
    path.mkdir(parents=True, exist_ok=True)
    probe = path / ".write_probe"
    probe.write_text("")
    probe.unlink()
    return path


def profile_stem(config, t):
    return f"{config.case}_{config.spatial}_{config.temporal}_m{config.m}_t{t:.6g}"


def emit_profiles(result, output_dir):
    """Write ``x u`` files for the numerical and exact profiles; returns the paths."""
    out = ensure_writable(Path(output_dir) / "profiles")
    paths = []
    for prof in result.profiles:
        stem = profile_stem(result.config, prof.t)
        for suffix, values in (("", prof.u), ("_exact", prof.exact)):
            p = out / f"{stem}{suffix}.dat"
            np.savetxt(p, np.column_stack([prof.x, values]), fmt="%.17g")
            paths.append(p)
    return paths


# -- config files --------------------------------------------------------------

_BOOL = {"1": True, "true": True, "yes": True, "on": True,
         "0": False, "false": False, "no": False, "off": False}


def parse_bool(text):
    try:
        return _BOOL[str(text).strip().lower()]
    except KeyError:
        raise ConfigurationError(f"not a boolean: {text!r}") from None


def read_config_file(path):
    """Flat ``key = value`` file; ``#`` starts a comment. Keys are normalised to snake_case."""
    values = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigurationError(f"{path}:{lineno}: expected 'key = value'")
            key, val = (s.strip() for s in line.split("=", 1))
            values[key.replace("-", "_").lower()] = val
    return values
