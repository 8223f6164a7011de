"""L2 / L-infinity errors against an exact solution."""
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError

NORM_MODES = ("quadrature", "nodal")

_G4_X, _G4_W = np.polynomial.legendre.leggauss(4)
_G4_SIGMA = 0.5 * (_G4_X + 1.0)
_G4_WEIGHT = 0.5 * _G4_W


def _log10(v):
    return math.log10(v) if v > 0 else -math.inf


@dataclass(frozen=True)
class ErrorReport:
    l2: float
    linf: float
    t: float
    formulation: str = ""
    m: int = None
    dt: float = None
    Re: float = None
    log10_l2: float = field(init=False)
    log10_linf: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "log10_l2", _log10(self.l2))
        object.__setattr__(self, "log10_linf", _log10(self.linf))


def error_norms(mesh, u_nodal, exact, t, mode="quadrature"):
    """``(l2, linf)`` of ``u_h - exact(., t)``.

    ``quadrature``: L-infinity over nodes and element midpoints, L2 of the
    continuous error with 4-point Gauss per element. ``nodal``: L-infinity
    over nodes, ``L2 = sqrt(h sum_j e_j^2)`` over all nodes.
    """
    u = np.asarray(getattr(u_nodal, "u", u_nodal), dtype=float)
    e_nodes = u - exact(mesh.nodes, t)
    if mode == "nodal":
        # h-weighted sum over all nodes; interior nodes use their mean adjacent size
        w = np.empty(mesh.n_nodes)
        w[1:-1] = 0.5 * (mesh.h[:-1] + mesh.h[1:])
        w[0], w[-1] = mesh.h[0], mesh.h[-1]
        return float(np.sqrt(np.sum(w * e_nodes**2))), float(np.abs(e_nodes).max())
    if mode != "quadrature":
        raise ConfigurationError(f"unknown norm mode {mode!r}; expected one of {NORM_MODES}")
    xm = mesh.midpoints()
    e_mid = 0.5 * (u[:-1] + u[1:]) - exact(xm, t)
    linf = max(np.abs(e_nodes).max(), np.abs(e_mid).max())
    xq = mesh.nodes[:-1, None] + mesh.h[:, None] * _G4_SIGMA[None, :]
    uq = u[:-1, None] * (1.0 - _G4_SIGMA) + u[1:, None] * _G4_SIGMA
    eq = uq - exact(xq, t)
    l2 = np.sqrt(np.sum(mesh.h[:, None] * _G4_WEIGHT[None, :] * eq**2))
    return float(l2), float(linf)


def compute_errors(mesh, numerical, exact, t, mode="quadrature", formulation="",
                   dt=None, Re=None):
    l2, linf = error_norms(mesh, numerical, exact, t, mode)
    return ErrorReport(l2, linf, float(t), formulation, mesh.m, dt, Re)


def total_variation(u):
    u = np.asarray(getattr(u, "u", u), dtype=float)
    return float(np.abs(np.diff(u)).sum())
