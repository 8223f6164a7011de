"""Uniform 1D meshes of linear elements and the element-local hat basis.

Nodes are numbered ``0..m`` left to right and element ``j`` spans
``[nodes[j], nodes[j+1]]`` (zero-based; element ``j`` here is ``e_{j+1}`` in the
usual one-based labelling).
"""
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DomainError


@dataclass(frozen=True)
class Mesh1D:
    a: float
    b: float
    m: int
    nodes: np.ndarray
    h: np.ndarray

    def __post_init__(self):
        # freeze the arrays so a mesh can be shared safely
        self.nodes.setflags(write=False)
        self.h.setflags(write=False)

    @property
    def n_nodes(self):
        return self.m + 1

    @property
    def length(self):
        return self.b - self.a

    def midpoints(self):
        return 0.5 * (self.nodes[:-1] + self.nodes[1:])

    def locate(self, x):
        """Element index containing ``x`` (right endpoint belongs to the last element)."""
        x = np.asarray(x, dtype=float)
        tol = 1e-12 * self.length
        if np.any(x < self.a - tol) or np.any(x > self.b + tol):
            raise DomainError(f"point outside mesh domain [{self.a}, {self.b}]")
        idx = np.searchsorted(self.nodes, x, side="right") - 1
        return np.clip(idx, 0, self.m - 1)


@dataclass(frozen=True)
class LocalBasis:
    psi1: float
    psi2: float
    dpsi1: float
    dpsi2: float


def build_uniform_mesh(a, b, m):
    """Partition ``[a, b]`` into ``m`` equal linear elements."""
    if not isinstance(m, (int, np.integer)) or isinstance(m, bool) or m < 1:
        raise ConfigurationError(f"element count must be a positive integer, got {m!r}")
    a = float(a)
    b = float(b)
    if not b > a:
        raise ConfigurationError(f"need b > a, got a={a}, b={b}")
    nodes = np.linspace(a, b, int(m) + 1)
    nodes[0], nodes[-1] = a, b
    h = np.diff(nodes)
    return Mesh1D(a=a, b=b, m=int(m), nodes=nodes, h=h)


def eval_local_basis(mesh, element, sigma):
    """Linear shape functions on ``element`` at local coordinate ``sigma`` in [0, 1]."""
    if not 0 <= element < mesh.m:
        raise IndexError(f"element {element} out of range for mesh with {mesh.m} elements")
    if not 0.0 <= sigma <= 1.0:
        raise DomainError(f"local coordinate sigma={sigma} outside [0, 1]")
    hj = mesh.h[element]
    return LocalBasis(psi1=1.0 - sigma, psi2=float(sigma), dpsi1=-1.0 / hj, dpsi2=1.0 / hj)


def hat_functions(mesh, x):
    """Values of all global hat functions at points ``x``; shape ``(len(x), m+1)``.

    Dense, meant for checks on small meshes.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    e = mesh.locate(x)
    sigma = (x - mesh.nodes[e]) / mesh.h[e]
    phi = np.zeros((x.size, mesh.n_nodes))
    rows = np.arange(x.size)
    phi[rows, e] += 1.0 - sigma
    phi[rows, e + 1] += sigma
    return phi


def interpolate(mesh, coeffs, x):
    """Evaluate the piecewise-linear function with nodal values ``coeffs`` at ``x``.

    ``coeffs`` may be a plain nodal array or a :class:`SolutionField`.
    """
    u = np.asarray(getattr(coeffs, "u", coeffs), dtype=float)
    if u.shape != (mesh.n_nodes,):
        raise ConfigurationError(f"expected {mesh.n_nodes} nodal values, got shape {u.shape}")
    scalar = np.ndim(x) == 0
    x = np.atleast_1d(np.asarray(x, dtype=float))
    e = mesh.locate(x)
    sigma = np.clip((x - mesh.nodes[e]) / mesh.h[e], 0.0, 1.0)
    val = (1.0 - sigma) * u[e] + sigma * u[e + 1]
    return float(val[0]) if scalar else val
