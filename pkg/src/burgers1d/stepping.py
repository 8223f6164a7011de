"""Time stepping of the linearised semi-discrete Burgers system."""
from dataclasses import dataclass
from typing import Callable, Optional

from . import assembly
from .assembly import apply_dirichlet, frozen_coeffs, linearize
from .errors import ConfigurationError, DivergenceError, SingularSystemError, SolverFailure
from .fields import SolutionField
from .mesh import Mesh1D
from .pade import build_lsq_stage_system, build_stage_system
from .solver import solve_block_tridiag

SPATIAL_METHODS = ("mefmq", "mefg", "supg")


@dataclass(frozen=True)
class StepperContext:
    """Everything ``advance`` needs besides the scheme and the state.

    ``frozen_velocity`` (scalar or per-element array) replaces the per-step
    linearisation with a fixed convective speed, turning the model into a
    linear convection-diffusion problem.
    """

    mesh: Mesh1D
    eps: float
    spatial: str
    source: Optional[Callable] = None
    linearization_mode: str = "element_mean"
    supg_mass_perturbation: bool = True
    frozen_velocity: object = None
    backend: Optional[str] = None

    def __post_init__(self):
        if self.spatial not in SPATIAL_METHODS:
            raise ConfigurationError(
                f"unknown spatial method {self.spatial!r}; expected one of {SPATIAL_METHODS}"
            )
        if not self.eps > 0:
            raise ConfigurationError(f"eps must be positive, got {self.eps}")
        if self.linearization_mode not in assembly.LINEARIZATION_MODES:
            raise ConfigurationError(f"unknown linearization mode {self.linearization_mode!r}")

    @property
    def needs_derivative(self):
        return self.spatial == "mefmq"

    def coefficients(self, state):
        if self.frozen_velocity is not None:
            return frozen_coeffs(self.mesh, self.frozen_velocity, self.eps)
        return linearize(self.mesh, state.u, self.eps, self.linearization_mode)


def _boundary_dofs(mesh, n_stages, n_fields):
    bs = n_stages * n_fields
    return {
        node * bs + st * n_fields: 0.0
        for node in (0, mesh.m)
        for st in range(n_stages)
    }


def stage_system(scheme, state, ctx, dt, t=0.0):
    """Assembled, boundary-corrected stage system for one step from ``state``."""
    mesh = ctx.mesh
    coeffs = ctx.coefficients(state)
    t_stage = t + dt * scheme.stage_times
    if ctx.spatial == "mefmq":
        ops, loads_n = assembly.assemble_lsq(mesh, coeffs, ctx.eps, ctx.source, t)
        loads_stages = [assembly.lsq_loads(mesh, coeffs, ctx.eps, ctx.source, ts)
                        for ts in t_stage]
        system = build_lsq_stage_system(scheme, dt, ops, state.stacked(), loads_n, loads_stages)
        n_fields = 2
    else:
        if ctx.spatial == "mefg":
            M, K, F_n = assembly.assemble_galerkin(mesh, coeffs, ctx.eps, ctx.source, t)
            load = lambda ts: assembly.galerkin_load(mesh, ctx.source, ts)
        else:
            M, K, F_n = assembly.assemble_supg(
                mesh, coeffs, ctx.eps, ctx.source, t, ctx.supg_mass_perturbation
            )
            load = lambda ts: assembly.supg_load(mesh, coeffs, ctx.eps, ctx.source, ts)
        F_stages = [load(ts) for ts in t_stage] if ctx.source is not None else None
        system = build_stage_system(scheme, dt, M, K, state.u, F_n, F_stages)
        n_fields = 1
    return apply_dirichlet(system, _boundary_dofs(mesh, scheme.n_stages, n_fields)), n_fields


def advance(scheme, state, ctx, dt, t=0.0, step=0):
    """One step of size ``dt`` from ``state`` at time ``t``; returns a new field.

    The solution after the step is ``u^n`` plus the sum of the stage
    increments (for R22 the first increment reaches ``t + dt/2``).
    """
    if not dt > 0:
        raise ConfigurationError(f"time step must be positive, got {dt}")
    system, n_fields = stage_system(scheme, state, ctx, dt, t)
    try:
        x = solve_block_tridiag(system.matrix, system.rhs, backend=ctx.backend)
    except SingularSystemError as exc:
        raise SolverFailure(step, exc) from exc
    flat = x.reshape(-1)
    flat[system.dirichlet_dofs] = system.dirichlet_values
    incr = x.reshape(ctx.mesh.n_nodes, scheme.n_stages, n_fields).sum(axis=1)
    if n_fields == 2:
        new = SolutionField.from_stacked(state.stacked() + incr)
    else:
        new = SolutionField(state.u + incr[:, 0])
    if not new.is_finite():
        raise DivergenceError(step)
    return new


def integrate(scheme, state, ctx, dt, output_steps, t0=0.0):
    """March from ``t0`` and return ``{step: SolutionField}`` at ``output_steps``.

    Step ``0`` returns (a copy of) the initial state.
    """
    wanted = sorted(set(int(k) for k in output_steps))
    if wanted and wanted[0] < 0:
        raise ConfigurationError("output steps must be non-negative")
    out = {}
    current = state.copy()
    if 0 in wanted:
        out[0] = current.copy()
    last = wanted[-1] if wanted else 0
    for n in range(last):
        current = advance(scheme, current, ctx, dt, t0 + n * dt, step=n + 1)
        if n + 1 in wanted:
            out[n + 1] = current.copy()
    return out
