"""Exact-solution test problems for the viscous Burgers equation.

``example1``
    Decaying sine profile on ``[0, 1]`` with homogeneous boundary values,
    obtained from the Cole-Hopf transform of ``k + exp(-pi^2 eps t) cos(pi x)``.
``example2``
    Viscous shock travelling at speed ``(u1 + u2)/2`` on ``[-0.5, 0.5]``. The
    upstream (left) state is the larger plateau ``u2`` and the downstream
    state is ``u1``: a monotone travelling wave of ``u_t + u u_x = eps u_xx``
    must decrease in ``x``. ``profile="printed"`` selects the mirrored,
    increasing profile (left ``u1``, right ``u2``) instead; that profile is
    not a solution of the viscous equation and the numerics then produce a
    rarefaction.
"""
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ConfigurationError, DomainError
from .fields import SolutionField

EXP_CLAMP = 700.0


def example1_exact(x, t, eps, k):
    """``2 eps pi e^{-pi^2 eps t} sin(pi x) / (k + e^{-pi^2 eps t} cos(pi x))``, ``k > 1``."""
    if not k > 1:
        raise DomainError(f"example1 requires k > 1, got {k}")
    x = np.asarray(x, dtype=float)
    decay = np.exp(-np.pi**2 * eps * np.asarray(t, dtype=float))
    return 2.0 * eps * np.pi * decay * np.sin(np.pi * x) / (k + decay * np.cos(np.pi * x))


def example2_exact(x, t, Re, u1, u2, profile="shock"):
    """Travelling viscous shock between the plateaus ``u1 < u2``.

    ``u -> u2`` as ``x -> -inf`` and ``u -> u1`` as ``x -> +inf``; the centre
    value ``(u1 + u2)/2`` sits at ``x = (u1 + u2) t / 2``.
    """
    if not Re > 0:
        raise DomainError(f"Reynolds number must be positive, got {Re}")
    if not u1 < u2:
        raise DomainError(f"example2 requires u1 < u2, got {u1}, {u2}")
    x = np.asarray(x, dtype=float)
    sign = {"shock": 1.0, "printed": -1.0}[profile]
    arg = sign * Re * 0.5 * (u2 - u1) * (x - 0.5 * (u1 + u2) * np.asarray(t, dtype=float))
    return u1 + (u2 - u1) / (1.0 + np.exp(np.clip(arg, -EXP_CLAMP, EXP_CLAMP)))


@dataclass(frozen=True)
class BenchmarkCase:
    name: str
    a: float
    b: float
    Re: float
    m: int
    dt: float
    t_out: tuple
    k: float = None
    u1: float = None
    u2: float = None
    jump_value: float = None  # initial value at a node sitting on the jump (example2)
    profile: str = "shock"  # example2 orientation, see module docstring
    table_m: tuple = field(default=(), compare=False)

    def __post_init__(self):
        if not self.Re > 0:
            raise ConfigurationError(f"Reynolds number must be positive, got {self.Re}")
        if self.name == "example1" and not (self.k is not None and self.k > 1):
            raise ConfigurationError("example1 requires k > 1")
        if self.name == "example2":
            if not (self.u1 < self.u2):
                raise ConfigurationError("example2 requires u1 < u2")
            if self.profile not in ("shock", "printed"):
                raise ConfigurationError(f"unknown example2 profile {self.profile!r}")

    @property
    def eps(self):
        return 1.0 / self.Re

    @property
    def bc(self):
        """Constant Dirichlet values ``(left, right)``."""
        if self.name == "example1":
            return (0.0, 0.0)
        if self.profile == "shock":
            return (self.u2, self.u1)
        return (self.u1, self.u2)

    @property
    def domain(self):
        return (self.a, self.b)

    def exact(self, x, t):
        if self.name == "example1":
            return example1_exact(x, t, self.eps, self.k)
        return example2_exact(x, t, self.Re, self.u1, self.u2, self.profile)

    def with_overrides(self, **kw):
        return replace(self, **{k: v for k, v in kw.items() if v is not None})


CASES = {
    "example1": BenchmarkCase(
        name="example1", a=0.0, b=1.0, Re=1e5, k=2.0,
        m=50, dt=0.5, t_out=(0.5, 1.0), table_m=(50, 1000),
    ),
    "example2": BenchmarkCase(
        name="example2", a=-0.5, b=0.5, Re=1e4, u1=0.5, u2=1.5,
        m=3000, dt=0.05 / 152, t_out=(0.05, 0.1), table_m=(3000, 4000),
    ),
}


def get_case(name, **overrides):
    try:
        case = CASES[name]
    except KeyError:
        raise ConfigurationError(f"unknown benchmark case {name!r}; known: {sorted(CASES)}") from None
    return case.with_overrides(**overrides)


def initial_values(case, x):
    """Initial condition at points ``x`` (the jump point of example2 gets ``jump_value``)."""
    x = np.asarray(x, dtype=float)
    if case.name == "example1":
        return example1_exact(x, 0.0, case.eps, case.k)
    mid = 0.5 * (case.u1 + case.u2) if case.jump_value is None else case.jump_value
    left, right = case.bc
    tol = 1e-12 * (case.b - case.a)
    return np.where(x < -tol, left, np.where(x > tol, right, mid))


def initial_field(case, mesh, with_derivative=False):
    """Nodal interpolant of the initial data, boundary nodes set to ``case.bc``.

    With ``with_derivative`` the auxiliary ``v`` holds, at each node, the mean
    slope of the interpolant over the adjacent elements.
    """
    tol = 1e-9 * (case.b - case.a)
    if abs(mesh.a - case.a) > tol or abs(mesh.b - case.b) > tol:
        raise ConfigurationError(
            f"mesh [{mesh.a}, {mesh.b}] does not match {case.name} domain [{case.a}, {case.b}]"
        )
    u = initial_values(case, mesh.nodes)
    u[0], u[-1] = case.bc
    v = None
    if with_derivative:
        v = nodal_slopes(mesh, u)
    return SolutionField(u, v)


def nodal_slopes(mesh, u):
    """Average of the element slopes touching each node."""
    slope = np.diff(u) / mesh.h
    v = np.empty(mesh.n_nodes)
    v[0], v[-1] = slope[0], slope[-1]
    v[1:-1] = 0.5 * (slope[:-1] + slope[1:])
    return v
