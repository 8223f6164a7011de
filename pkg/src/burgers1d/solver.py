"""Direct solvers for block-tridiagonal systems.

``solve_block_tridiag`` runs a block Thomas elimination with partially pivoted
Gaussian elimination inside each pivot block. The compiled kernel is used when
numba is enabled (see :mod:`burgers1d._jit`); the pure numpy path factors each
pivot block with LAPACK. ``solve_dense_oracle`` is an independent dense
reference used by the tests.
"""
import warnings

import numpy as np
import scipy.linalg

from . import _jit
from .banded import BandedMatrix
from .errors import AssemblyError, SingularSystemError

#: relative pivot size below which a pivot block is declared singular
PIVOT_RTOL = 1e-14

DENSE_MAX_N = 2000


def _lu(S):
    # singularity is judged by our own pivot test, not LAPACK's warning
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        return scipy.linalg.lu_factor(S, check_finite=False)


@_jit.njit
def _gepp_solve(S, R, rtol):
    """Overwrite ``R`` with ``S^{-1} R``; ``S`` is destroyed. Returns False if singular."""
    n = S.shape[0]
    k = R.shape[1]
    scale = 0.0
    for i in range(n):
        for j in range(n):
            a = abs(S[i, j])
            if a > scale:
                scale = a
    if scale == 0.0:
        return False
    for c in range(n):
        p = c
        best = abs(S[c, c])
        for r in range(c + 1, n):
            a = abs(S[r, c])
            if a > best:
                best = a
                p = r
        if best <= rtol * scale:
            return False
        if p != c:
            for j in range(n):
                tmp = S[c, j]
                S[c, j] = S[p, j]
                S[p, j] = tmp
            for j in range(k):
                tmp = R[c, j]
                R[c, j] = R[p, j]
                R[p, j] = tmp
        piv = S[c, c]
        for r in range(c + 1, n):
            f = S[r, c] / piv
            if f != 0.0:
                for j in range(c + 1, n):
                    S[r, j] -= f * S[c, j]
                for j in range(k):
                    R[r, j] -= f * R[c, j]
    for c in range(n - 1, -1, -1):
        piv = S[c, c]
        for j in range(k):
            s = R[c, j]
            for q in range(c + 1, n):
                s -= S[c, q] * R[q, j]
            R[c, j] = s / piv
    return True


@_jit.njit
def _block_thomas_kernel(lower, diag, upper, rhs, rtol):
    """Block Thomas sweep. Returns ``(x, -1)`` or ``(partial, failing_block)``."""
    n, bs, _ = diag.shape
    cprime = np.zeros((max(n - 1, 0), bs, bs))
    dprime = np.zeros((n, bs))
    x = np.zeros((n, bs))
    S = np.empty((bs, bs))
    R = np.empty((bs, bs + 1))
    for j in range(n):
        for a in range(bs):
            for b in range(bs):
                s = diag[j, a, b]
                if j > 0:
                    for q in range(bs):
                        s -= lower[j - 1, a, q] * cprime[j - 1, q, b]
                S[a, b] = s
            r = rhs[j, a]
            if j > 0:
                for q in range(bs):
                    r -= lower[j - 1, a, q] * dprime[j - 1, q]
            R[a, bs] = r
            for b in range(bs):
                R[a, b] = upper[j, a, b] if j < n - 1 else 0.0
        if not _gepp_solve(S, R, rtol):
            return x, j
        for a in range(bs):
            dprime[j, a] = R[a, bs]
            if j < n - 1:
                for b in range(bs):
                    cprime[j, a, b] = R[a, b]
    for a in range(bs):
        x[n - 1, a] = dprime[n - 1, a]
    for j in range(n - 2, -1, -1):
        for a in range(bs):
            s = dprime[j, a]
            for b in range(bs):
                s -= cprime[j, a, b] * x[j + 1, b]
            x[j, a] = s
    return x, -1


def _block_thomas_numpy(lower, diag, upper, rhs, rtol):
    n, bs, _ = diag.shape
    cprime = np.zeros((max(n - 1, 0), bs, bs))
    dprime = np.zeros((n, bs))
    for j in range(n):
        S = diag[j].copy()
        r = rhs[j].copy()
        if j > 0:
            S -= lower[j - 1] @ cprime[j - 1]
            r -= lower[j - 1] @ dprime[j - 1]
        scale = np.abs(S).max()
        lu, piv = _lu(S)
        if scale == 0.0 or np.abs(np.diag(lu)).min() <= rtol * scale:
            return None, j
        if j < n - 1:
            cprime[j] = scipy.linalg.lu_solve((lu, piv), upper[j], check_finite=False)
        dprime[j] = scipy.linalg.lu_solve((lu, piv), r, check_finite=False)
    x = np.empty((n, bs))
    x[-1] = dprime[-1]
    for j in range(n - 2, -1, -1):
        x[j] = dprime[j] - cprime[j] @ x[j + 1]
    return x, -1


def solve_block_tridiag(A, b, backend=None):
    """Solve ``A x = b`` for a :class:`BandedMatrix` ``A``.

    Parameters
    ----------
    A : BandedMatrix
    b : ndarray
        Right-hand side, flat ``(n*bs,)`` or nodal ``(n, bs)``; the solution is
        returned in the same shape.
    backend : {None, "numba", "numpy"}
        ``None`` picks numba when it is enabled.

    Raises
    ------
    SingularSystemError
        If a Schur-complement pivot block has a pivot below ``1e-14`` of its
        largest entry. ``pivot_index`` is the failing block row.
    """
    if not isinstance(A, BandedMatrix):
        raise AssemblyError("solve_block_tridiag expects a BandedMatrix")
    b = np.asarray(b, dtype=float)
    n, bs = A.n_blocks, A.block_size
    if b.size != n * bs:
        raise AssemblyError(f"rhs of size {b.size} does not match a {n * bs} system")
    rhs = np.ascontiguousarray(b.reshape(n, bs))
    if backend is None:
        backend = "numba" if _jit.NUMBA_ENABLED else "numpy"
    if backend == "numba":
        if not _jit.NUMBA_ENABLED:
            raise RuntimeError("numba backend requested but numba is disabled")
        x, status = _block_thomas_kernel(
            np.ascontiguousarray(A.lower), np.ascontiguousarray(A.diag),
            np.ascontiguousarray(A.upper), rhs, PIVOT_RTOL,
        )
    elif backend == "numpy":
        x, status = _block_thomas_numpy(A.lower, A.diag, A.upper, rhs, PIVOT_RTOL)
    else:
        raise ValueError(f"unknown backend {backend!r}")
    if status >= 0:
        raise SingularSystemError(status)
    return x.reshape(b.shape)


def solve_dense_oracle(A, b):
    """Dense Gaussian elimination with partial pivoting (LAPACK ``getrf``)."""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    b = np.asarray(b, dtype=float)
    n = A.shape[0]
    if A.shape != (n, n):
        raise AssemblyError(f"matrix must be square, got {A.shape}")
    if n > DENSE_MAX_N:
        raise AssemblyError(f"dense oracle limited to n <= {DENSE_MAX_N}, got {n}")
    if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b))):
        raise AssemblyError("dense oracle input contains non-finite values")
    lu, piv = _lu(A)
    d = np.abs(np.diag(lu))
    if d.min() <= PIVOT_RTOL * np.abs(A).max():
        raise SingularSystemError(int(np.argmin(d)), "dense system is numerically singular")
    return scipy.linalg.lu_solve((lu, piv), b)
