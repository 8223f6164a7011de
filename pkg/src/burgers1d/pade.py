"""Pade approximants of ``exp(h)`` and the implicit multi-stage schemes built on them.

A scheme with ``n`` stages advances ``M du/dt + K u = F(t)`` by solving for the
stacked stage increments ``du = (du_1, ..., du_n)``::

    (I (x) M/dt + W (x) K) du = w (x) (F^n - K u^n) + (W (x) I) dF

where ``dF_s = F(t_s) - F(t_{s-1})`` at the stage end times. ``R11`` is the
Crank-Nicolson rule; ``R22`` is a coupled two-stage rule whose stability
function is the (2, 2) Pade approximant.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

import numpy as np

from .banded import AssembledSystem, block_kron_vector
from .errors import AssemblyError, ConfigurationError, DomainError, PoleError

MAX_DEGREE = 3
POLE_TOL = 1e-14


@dataclass(frozen=True)
class PadeRational:
    """``R_LM(h) = N(h) / D(h)`` with coefficients stored constant term first."""

    L: int
    M: int
    numerator: tuple
    denominator: tuple

    def __call__(self, h):
        return _horner(self.numerator, h) / _horner(self.denominator, h)

    def scaled(self):
        """Integer coefficients with the smallest common scale (as tabulated)."""
        den = 1
        for c in self.numerator + self.denominator:
            den = den * c.denominator // _gcd(den, c.denominator)
        num = [int(c * den) for c in self.numerator]
        dd = [int(c * den) for c in self.denominator]
        g = 0
        for c in num + dd:
            g = _gcd(g, abs(c))
        return tuple(c // g for c in num), tuple(c // g for c in dd)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _horner(coeffs, h):
    acc = coeffs[-1] * 1
    for c in reversed(coeffs[:-1]):
        acc = acc * h + c
    return acc


def pade_rational(L, M):
    """Exact coefficients of the ``(L, M)`` Pade approximant of ``exp``."""
    if not (0 <= L <= MAX_DEGREE and 0 <= M <= MAX_DEGREE):
        raise DomainError(f"Pade degrees must lie in 0..{MAX_DEGREE}, got ({L}, {M})")
    n = L + M
    num = tuple(
        Fraction(factorial(n - j) * factorial(L), factorial(n) * factorial(j) * factorial(L - j))
        for j in range(L + 1)
    )
    den = tuple(
        (-1) ** j
        * Fraction(factorial(n - j) * factorial(M), factorial(n) * factorial(j) * factorial(M - j))
        for j in range(M + 1)
    )
    return PadeRational(L, M, num, den)


def pade_eval(L, M, h):
    """Floating-point value of ``R_LM(h)``; raises :class:`PoleError` near a pole."""
    r = pade_rational(L, M)
    h = float(h)
    num = _horner([float(c) for c in r.numerator], h)
    den = _horner([float(c) for c in r.denominator], h)
    if abs(den) <= POLE_TOL:
        raise PoleError(f"R_{L}{M} has a pole at h={h}")
    return num / den


@dataclass(frozen=True)
class PadeScheme:
    name: str
    n_stages: int
    W: np.ndarray
    w: np.ndarray
    stage_times: np.ndarray
    order: int

    def __post_init__(self):
        for arr in (self.W, self.w, self.stage_times):
            arr.setflags(write=False)


def make_scheme(name):
    """``"R11"`` (Crank-Nicolson) or ``"R22"`` (two-stage, fourth order)."""
    key = str(name).strip().upper()
    if key == "R11":
        return PadeScheme(
            "R11", 1, np.array([[0.5]]), np.array([1.0]), np.array([1.0]), order=2
        )
    if key == "R22":
        W = np.array([[7.0, -1.0], [13.0, 5.0]]) / 24.0
        return PadeScheme("R22", 2, W, np.array([0.5, 0.5]), np.array([0.5, 1.0]), order=4)
    raise ConfigurationError(f"unknown time scheme {name!r}; expected R11 or R22")


@dataclass(frozen=True)
class TimeGrid:
    t0: float
    dt: float
    n_steps: int
    times: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if not self.dt > 0:
            raise ConfigurationError(f"time step must be positive, got {self.dt}")
        if self.n_steps < 0:
            raise ConfigurationError("n_steps must be non-negative")
        object.__setattr__(self, "times", self.t0 + self.dt * np.arange(self.n_steps + 1))

    @property
    def t_final(self):
        return self.t0 + self.n_steps * self.dt

    @classmethod
    def covering(cls, t_end, dt, t0=0.0, rtol=1e-9):
        """Grid from ``t0`` to ``t_end``; ``t_end - t0`` must be a multiple of ``dt``."""
        k = (t_end - t0) / dt
        n = int(round(k))
        if abs(k - n) > rtol * max(1.0, abs(k)):
            raise ConfigurationError(f"t={t_end} is not an integer multiple of dt={dt}")
        return cls(t0, dt, n)


def _stage_increments(F_n, F_stages):
    prev = F_n
    out = []
    for Fs in F_stages:
        out.append(Fs - prev)
        prev = Fs
    return out


def build_stage_system(scheme, dt, M, K, u_n, F_n=None, F_stages=None):
    """Assemble the stacked stage-increment system for ``M du/dt + K u = F``.

    ``M`` and ``K`` are :class:`BandedMatrix` operators sharing one layout;
    ``u_n``, ``F_n`` and every ``F_stages[s]`` are nodal vectors in that layout.
    Missing sources mean ``F = 0``. Boundary conditions are not applied here.
    """
    if not dt > 0:
        raise ConfigurationError(f"time step must be positive, got {dt}")
    if M.diag.shape != K.diag.shape:
        raise AssemblyError(f"mass {M.diag.shape} and operator {K.diag.shape} layouts differ")
    n, bs = K.n_blocks, K.block_size
    s = scheme.n_stages
    u_n = _as_nodal(u_n, n, bs, "u_n")
    F_n = np.zeros((n, bs)) if F_n is None else _as_nodal(F_n, n, bs, "F_n")
    if F_stages is None:
        F_stages = [F_n] * s
    if len(F_stages) != s:
        raise AssemblyError(f"{scheme.name} needs {s} stage sources, got {len(F_stages)}")
    F_stages = [_as_nodal(F, n, bs, "F_stages") for F in F_stages]

    A = M.kron(np.eye(s)) / dt + K.kron(scheme.W)
    rhs = block_kron_vector(scheme.w, F_n - K.matvec(u_n))
    dF = np.stack(_stage_increments(F_n, F_stages), axis=1)  # (n, s, bs)
    rhs += np.einsum("sr,jrb->jsb", scheme.W, dF).reshape(n, s * bs)
    return AssembledSystem(A, rhs)


def build_lsq_stage_system(scheme, dt, ops, U_n, loads_n, loads_stages=None):
    """Least-squares stage system for the first-order form in ``(u, v)``.

    Minimises, over the stacked increments ``dU``, the squared L2 norms of the
    stage evolution residuals ``dU_u/dt + W L(dU) - w (f^n - L U^n) - W df`` and
    of the compatibility residuals ``v - u_x`` of every new stage state.
    ``ops`` comes from :func:`burgers1d.assembly.assemble_lsq`; ``loads_*`` are
    :class:`~burgers1d.assembly.LsqLoads` at ``t^n`` and at the stage times.
    The returned matrix is symmetric positive semidefinite.
    """
    if not dt > 0:
        raise ConfigurationError(f"time step must be positive, got {dt}")
    W = scheme.W
    s = scheme.n_stages
    n, bs = ops.G_EE.n_blocks, ops.G_EE.block_size
    U_n = _as_nodal(U_n, n, bs, "U_n")
    if loads_stages is None:
        loads_stages = [loads_n] * s
    if len(loads_stages) != s:
        raise AssemblyError(f"{scheme.name} needs {s} stage loads, got {len(loads_stages)}")
    T = np.tril(np.ones((s, s)))  # stage state = U^n + sum of increments so far

    A = (
        ops.G_EE.kron(np.eye(s)) / dt**2
        + (ops.G_EL.kron(W) + ops.G_EL.T.kron(W.T)) / dt
        + ops.G_LL.kron(W.T @ W)
        + ops.G_CC.kron(T.T @ T)
    )

    # residual targets g_q tested against E(phi) and L(phi)
    gE_n = loads_n.F_E - ops.G_EL.matvec(U_n)
    gL_n = loads_n.F_L - ops.G_LL.matvec(U_n)
    dE = _stage_increments(loads_n.F_E, [ld.F_E for ld in loads_stages])
    dL = _stage_increments(loads_n.F_L, [ld.F_L for ld in loads_stages])
    gE = [scheme.w[q] * gE_n + sum(W[q, r] * dE[r] for r in range(s)) for q in range(s)]
    gL = [scheme.w[q] * gL_n + sum(W[q, r] * dL[r] for r in range(s)) for q in range(s)]
    compat = ops.G_CC.matvec(U_n)
    Tsum = T.sum(axis=0)
    blocks = [
        gE[st] / dt + sum(W[q, st] * gL[q] for q in range(s)) - Tsum[st] * compat
        for st in range(s)
    ]
    rhs = np.stack(blocks, axis=1).reshape(n, s * bs)
    return AssembledSystem(A, rhs, symmetric=True)


def _as_nodal(x, n, bs, what):
    x = np.asarray(x, dtype=float)
    if x.size != n * bs:
        raise AssemblyError(f"{what} has {x.size} entries, expected {n * bs}")
    return x.reshape(n, bs)
