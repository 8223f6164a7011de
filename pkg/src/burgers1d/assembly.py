"""Element assembly for the Galerkin, SUPG and least-squares formulations.

The convective term ``u u_x`` is linearised once per time step by freezing the
transport speed on every element at a value ``u_elem`` taken from the previous
step, so each formulation reduces to a linear convection-diffusion operator.
All integrals use two-point Gauss quadrature per element, which is exact here
(linear basis, element-constant coefficients) apart from the source term.
"""
from dataclasses import dataclass

import numpy as np

from .banded import AssembledSystem, BandedMatrix
from .errors import AssemblyError, ConfigurationError, DomainError

_GAUSS_SIGMA = 0.5 + np.array([-0.5, 0.5]) / np.sqrt(3.0)
_GAUSS_WEIGHT = np.array([0.5, 0.5])

LINEARIZATION_MODES = ("element_mean", "upwind_node")


@dataclass(frozen=True)
class LinearizedElementCoeffs:
    """Per-element frozen speed ``u_elem`` with ``eta = u_elem/h``, ``zeta = eps/h**2``."""

    u_elem: np.ndarray
    eta: np.ndarray
    zeta: np.ndarray
    eps: float


def frozen_coeffs(mesh, u_elem, eps):
    u_elem = np.broadcast_to(np.asarray(u_elem, dtype=float), (mesh.m,)).copy()
    return LinearizedElementCoeffs(u_elem, u_elem / mesh.h, eps / mesh.h**2, float(eps))


def linearize(mesh, u_prev, eps, mode="element_mean"):
    """Freeze the convective speed element by element from the previous step.

    ``element_mean`` averages the two nodal values; ``upwind_node`` takes the
    value at the upstream node of the element.
    """
    u = np.asarray(getattr(u_prev, "u", u_prev), dtype=float)
    if u.shape != (mesh.n_nodes,):
        raise AssemblyError(f"u_prev has shape {u.shape}, mesh has {mesh.n_nodes} nodes")
    mean = 0.5 * (u[:-1] + u[1:])
    if mode == "element_mean":
        ue = mean
    elif mode == "upwind_node":
        ue = np.where(mean >= 0.0, u[:-1], u[1:])
    else:
        raise ConfigurationError(f"unknown linearization mode {mode!r}")
    return frozen_coeffs(mesh, ue, eps)


def compute_tau(u_elem, h, eps):
    """SUPG parameter ``((2u/h)^2 + 9 (4 eps/h^2)^2)^(-1/2)``; vectorises over elements."""
    u_elem = np.asarray(u_elem, dtype=float)
    h = np.asarray(h, dtype=float)
    if np.any(h <= 0) or np.any(np.asarray(eps) < 0):
        raise DomainError("tau needs h > 0 and eps >= 0")
    denom = (2.0 * u_elem / h) ** 2 + 9.0 * (4.0 * eps / h**2) ** 2
    if np.any(denom == 0.0):
        raise DomainError("tau is singular when both the speed and eps vanish")
    tau = denom ** -0.5
    return float(tau) if tau.ndim == 0 else tau


# -- quadrature helpers --------------------------------------------------------

def _quad_points(mesh):
    """Physical Gauss points, shape ``(m, 2)``."""
    return mesh.nodes[:-1, None] + mesh.h[:, None] * _GAUSS_SIGMA[None, :]


def _hat_values(mesh):
    """Local shape values and derivatives at Gauss points, each ``(m, ng, 2)``."""
    m = mesh.m
    psi = np.empty((m, _GAUSS_SIGMA.size, 2))
    psi[..., 0] = 1.0 - _GAUSS_SIGMA
    psi[..., 1] = _GAUSS_SIGMA
    dpsi = np.empty_like(psi)
    dpsi[..., 0] = -1.0 / mesh.h[:, None]
    dpsi[..., 1] = 1.0 / mesh.h[:, None]
    return psi, dpsi


def _gram(mesh, test, trial):
    """Element matrices ``int test_a trial_b`` from Gauss-point values ``(m, ng, nloc)``."""
    wh = mesh.h[:, None] * _GAUSS_WEIGHT[None, :]
    return np.einsum("eg,ega,egb->eab", wh, test, trial)


def _load(mesh, test, fvals):
    wh = mesh.h[:, None] * _GAUSS_WEIGHT[None, :]
    return np.einsum("eg,ega,eg->ea", wh, test, fvals)


def _scatter_matrix(elem, n_nodes, bs):
    """Sum element matrices with local dof order ``node*bs + field`` into block bands."""
    out = BandedMatrix.zeros(n_nodes, bs)
    out.diag[:-1] += elem[:, :bs, :bs]
    out.diag[1:] += elem[:, bs:, bs:]
    out.upper[:] += elem[:, :bs, bs:]
    out.lower[:] += elem[:, bs:, :bs]
    return out


def _scatter_vector(elem, n_nodes, bs):
    out = np.zeros((n_nodes, bs))
    out[:-1] += elem[:, :bs]
    out[1:] += elem[:, bs:]
    return out


def _source_values(mesh, f, t):
    if f is None:
        return np.zeros((mesh.m, _GAUSS_SIGMA.size))
    return np.broadcast_to(np.asarray(f(_quad_points(mesh), t), dtype=float),
                           (mesh.m, _GAUSS_SIGMA.size))


def _check_eps(eps):
    if not eps > 0:
        raise ConfigurationError(f"diffusion coefficient must be positive, got {eps}")


# -- Galerkin ------------------------------------------------------------------

def galerkin_load(mesh, f, t):
    psi, _ = _hat_values(mesh)
    return _scatter_vector(_load(mesh, psi, _source_values(mesh, f, t)), mesh.n_nodes, 1)[:, 0]


def assemble_galerkin(mesh, coeffs, eps, f=None, t=0.0):
    """Mass matrix, linearised convection-diffusion operator and load vector.

    Returns ``(M, K, F)`` with ``M``, ``K`` as scalar :class:`BandedMatrix`.
    """
    _check_eps(eps)
    psi, dpsi = _hat_values(mesh)
    ue = coeffs.u_elem[:, None, None]
    M = _scatter_matrix(_gram(mesh, psi, psi), mesh.n_nodes, 1)
    K_elem = _gram(mesh, psi, ue * dpsi) + eps * _gram(mesh, dpsi, dpsi)
    K = _scatter_matrix(K_elem, mesh.n_nodes, 1)
    return M, K, galerkin_load(mesh, f, t)


def convection_matrix(mesh, coeffs):
    psi, dpsi = _hat_values(mesh)
    return _scatter_matrix(_gram(mesh, psi, coeffs.u_elem[:, None, None] * dpsi), mesh.n_nodes, 1)


def diffusion_matrix(mesh, eps):
    _, dpsi = _hat_values(mesh)
    return _scatter_matrix(eps * _gram(mesh, dpsi, dpsi), mesh.n_nodes, 1)


# -- SUPG ----------------------------------------------------------------------

def _supg_weight(mesh, coeffs, eps):
    """Perturbed test functions ``tau u_elem w_x`` at Gauss points."""
    _, dpsi = _hat_values(mesh)
    tau = compute_tau(coeffs.u_elem, mesh.h, eps)
    return (tau * coeffs.u_elem)[:, None, None] * dpsi, tau


def supg_load(mesh, coeffs, eps, f, t):
    psi, _ = _hat_values(mesh)
    pert, _ = _supg_weight(mesh, coeffs, eps)
    fv = _source_values(mesh, f, t)
    return _scatter_vector(_load(mesh, psi + pert, fv), mesh.n_nodes, 1)[:, 0]


def assemble_supg(mesh, coeffs, eps, f=None, t=0.0, mass_perturbation=True):
    """Galerkin operators plus streamline-upwind residual terms.

    The test function on each element is ``w + tau u_elem w_x``. The diffusive
    part of the residual vanishes element-wise for linear elements. With
    ``mass_perturbation`` the perturbed test function is also applied to the
    time-derivative term, otherwise ``M`` is the plain Galerkin mass matrix.
    """
    _check_eps(eps)
    M, K, _ = assemble_galerkin(mesh, coeffs, eps)
    psi, dpsi = _hat_values(mesh)
    pert, _ = _supg_weight(mesh, coeffs, eps)
    ue = coeffs.u_elem[:, None, None]
    K = K + _scatter_matrix(_gram(mesh, pert, ue * dpsi), mesh.n_nodes, 1)
    if mass_perturbation:
        M = M + _scatter_matrix(_gram(mesh, pert, psi), mesh.n_nodes, 1)
    return M, K, supg_load(mesh, coeffs, eps, f, t)


# -- least squares (first-order system in u, v = u_x) --------------------------

@dataclass(frozen=True)
class LsqOperators:
    """Gram matrices of the least-squares functional, 2x2 nodal blocks ``(u, v)``.

    With ``E(u, v) = u``, ``L(u, v) = u_elem v - eps v_x`` and ``C(u, v) = v - u_x``:
    ``G_EE = (E, E)``, ``G_EL[i, j] = (E phi_i, L phi_j)``, ``G_LL = (L, L)`` and
    ``G_CC = (C, C)``.
    """

    G_EE: BandedMatrix
    G_EL: BandedMatrix
    G_LL: BandedMatrix
    G_CC: BandedMatrix


@dataclass(frozen=True)
class LsqLoads:
    """``F_E = (f, E phi)`` and ``F_L = (f, L phi)``, nodal ``(n, 2)``."""

    F_E: np.ndarray
    F_L: np.ndarray


def _lsq_values(mesh, coeffs, eps):
    psi, dpsi = _hat_values(mesh)
    shape = psi.shape[:2] + (4,)
    E = np.zeros(shape)
    L = np.zeros(shape)
    C = np.zeros(shape)
    ue = coeffs.u_elem[:, None]
    for a in range(2):
        iu, iv = 2 * a, 2 * a + 1
        E[..., iu] = psi[..., a]
        L[..., iv] = ue * psi[..., a] - eps * dpsi[..., a]
        C[..., iu] = -dpsi[..., a]
        C[..., iv] = psi[..., a]
    return E, L, C


def lsq_loads(mesh, coeffs, eps, f, t):
    E, L, _ = _lsq_values(mesh, coeffs, eps)
    fv = _source_values(mesh, f, t)
    n = mesh.n_nodes
    return LsqLoads(_scatter_vector(_load(mesh, E, fv), n, 2),
                    _scatter_vector(_load(mesh, L, fv), n, 2))


def assemble_lsq(mesh, coeffs, eps, f=None, t=0.0):
    """Least-squares operators and loads over nodal unknowns ``(u_j, v_j)``.

    Returns ``(LsqOperators, LsqLoads)``. The stage matrix is formed by
    :func:`burgers1d.pade.build_lsq_stage_system`, since the normal equations
    of the time-discrete residual depend on the step size.
    """
    _check_eps(eps)
    E, L, C = _lsq_values(mesh, coeffs, eps)
    n = mesh.n_nodes
    ops = LsqOperators(
        G_EE=_scatter_matrix(_gram(mesh, E, E), n, 2),
        G_EL=_scatter_matrix(_gram(mesh, E, L), n, 2),
        G_LL=_scatter_matrix(_gram(mesh, L, L), n, 2),
        G_CC=_scatter_matrix(_gram(mesh, C, C), n, 2),
    )
    return ops, lsq_loads(mesh, coeffs, eps, f, t)


def lsq_compatibility_residual(mesh, U):
    """``||v - u_x||_{L2}`` for nodal ``(u, v)`` pairs."""
    psi, dpsi = _hat_values(mesh)
    U = np.asarray(U, dtype=float)
    u_loc = np.stack([U[:-1, 0], U[1:, 0]], axis=1)
    v_loc = np.stack([U[:-1, 1], U[1:, 1]], axis=1)
    r = np.einsum("ega,ea->eg", psi, v_loc) - np.einsum("ega,ea->eg", dpsi, u_loc)
    wh = mesh.h[:, None] * _GAUSS_WEIGHT[None, :]
    return float(np.sqrt(np.sum(wh * r**2)))


# -- boundary conditions -------------------------------------------------------

def apply_dirichlet(system, bc):
    """Return a copy of ``system`` with identity rows at prescribed dofs.

    ``bc`` maps flat dof indices to prescribed values (increments, for stage
    systems). When ``system.symmetric`` is set, the prescribed columns are
    eliminated into the right-hand side as well so symmetry is preserved.
    """
    A = system.matrix.copy()
    rhs = system.rhs.copy()
    n, bs = A.n_blocks, A.block_size
    items = sorted((int(k), float(v)) for k, v in dict(bc).items())
    for dof, _ in items:
        if not 0 <= dof < n * bs:
            raise IndexError(f"Dirichlet dof {dof} outside system of size {n * bs}")
    if system.symmetric:
        for dof, val in items:
            j, k = divmod(dof, bs)
            if val != 0.0:
                rhs[j] -= A.diag[j][:, k] * val
                if j + 1 < n:
                    rhs[j + 1] -= A.lower[j][:, k] * val
                if j > 0:
                    rhs[j - 1] -= A.upper[j - 1][:, k] * val
            A.diag[j][:, k] = 0.0
            if j + 1 < n:
                A.lower[j][:, k] = 0.0
            if j > 0:
                A.upper[j - 1][:, k] = 0.0
    for dof, val in items:
        j, k = divmod(dof, bs)
        A.diag[j][k, :] = 0.0
        if j + 1 < n:
            A.upper[j][k, :] = 0.0
        if j > 0:
            A.lower[j - 1][k, :] = 0.0
        A.diag[j][k, k] = 1.0
        rhs[j, k] = val
    dofs = np.array([d for d, _ in items], dtype=int)
    vals = np.array([v for _, v in items], dtype=float)
    return AssembledSystem(A, rhs, dofs, vals, symmetric=system.symmetric)
