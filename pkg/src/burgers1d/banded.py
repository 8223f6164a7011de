"""Block-tridiagonal matrix storage.

A :class:`BandedMatrix` with ``n`` block rows of size ``bs`` stores

* ``diag[j]``  -- block ``(j, j)``,
* ``upper[j]`` -- block ``(j, j+1)``,
* ``lower[j]`` -- block ``(j+1, j)``.

Unknowns are ordered node-major: global index ``j*bs + k`` is component ``k`` of
node ``j``. For stage systems the component index is ``stage*n_fields + field``.
"""
from dataclasses import dataclass

import numpy as np

from .errors import AssemblyError


@dataclass
class BandedMatrix:
    lower: np.ndarray
    diag: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        self.lower = np.asarray(self.lower, dtype=float)
        self.diag = np.asarray(self.diag, dtype=float)
        self.upper = np.asarray(self.upper, dtype=float)
        n, bs, bs2 = self.diag.shape
        if bs != bs2:
            raise AssemblyError("diagonal blocks must be square")
        off = (max(n - 1, 0), bs, bs)
        if self.lower.shape != off or self.upper.shape != off:
            raise AssemblyError(
                f"off-diagonal blocks must have shape {off}, got "
                f"{self.lower.shape} and {self.upper.shape}"
            )

    @property
    def n_blocks(self):
        return self.diag.shape[0]

    @property
    def block_size(self):
        return self.diag.shape[1]

    @property
    def shape(self):
        n = self.n_blocks * self.block_size
        return (n, n)

    @classmethod
    def zeros(cls, n_blocks, block_size=1):
        bs = block_size
        return cls(
            np.zeros((n_blocks - 1, bs, bs)),
            np.zeros((n_blocks, bs, bs)),
            np.zeros((n_blocks - 1, bs, bs)),
        )

    @classmethod
    def from_scalar_bands(cls, lower, diag, upper):
        """Build a ``block_size=1`` matrix from three ordinary diagonals."""
        return cls(
            np.asarray(lower, float)[:, None, None],
            np.asarray(diag, float)[:, None, None],
            np.asarray(upper, float)[:, None, None],
        )

    @classmethod
    def from_dense(cls, A, block_size=1):
        A = np.asarray(A, dtype=float)
        bs = block_size
        if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] % bs:
            raise AssemblyError(f"cannot split {A.shape} matrix into {bs}x{bs} blocks")
        n = A.shape[0] // bs
        B = A.reshape(n, bs, n, bs).transpose(0, 2, 1, 3)
        idx = np.arange(n)
        out = cls(B[idx[1:], idx[:-1]], B[idx, idx], B[idx[:-1], idx[1:]])
        if not np.array_equal(out.to_dense(), A):
            raise AssemblyError("matrix is not block tridiagonal")
        return out

    def to_dense(self):
        n, bs = self.n_blocks, self.block_size
        B = np.zeros((n, n, bs, bs))
        idx = np.arange(n)
        B[idx, idx] = self.diag
        B[idx[:-1], idx[1:]] = self.upper
        B[idx[1:], idx[:-1]] = self.lower
        return B.transpose(0, 2, 1, 3).reshape(n * bs, n * bs)

    def copy(self):
        return BandedMatrix(self.lower.copy(), self.diag.copy(), self.upper.copy())

    def transpose(self):
        t = lambda blocks: np.swapaxes(blocks, 1, 2)
        return BandedMatrix(t(self.upper), t(self.diag), t(self.lower))

    T = property(transpose)

    def _check_conforming(self, other):
        if self.diag.shape != other.diag.shape:
            raise AssemblyError(
                f"layout mismatch: {self.diag.shape} vs {other.diag.shape}"
            )

    def __add__(self, other):
        self._check_conforming(other)
        return BandedMatrix(
            self.lower + other.lower, self.diag + other.diag, self.upper + other.upper
        )

    def __sub__(self, other):
        return self + (-1.0) * other

    def __mul__(self, c):
        c = float(c)
        return BandedMatrix(c * self.lower, c * self.diag, c * self.upper)

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self * (1.0 / float(c))

    def __neg__(self):
        return -1.0 * self

    def matvec(self, x):
        """Product with ``x`` given flat ``(n*bs,)`` or nodal ``(n, bs)``; same shape out."""
        x = np.asarray(x, dtype=float)
        flat = x.ndim == 1
        X = x.reshape(self.n_blocks, self.block_size)
        Y = np.einsum("jab,jb->ja", self.diag, X)
        if self.n_blocks > 1:
            Y[:-1] += np.einsum("jab,jb->ja", self.upper, X[1:])
            Y[1:] += np.einsum("jab,jb->ja", self.lower, X[:-1])
        return Y.ravel() if flat else Y

    def __matmul__(self, x):
        return self.matvec(x)

    def kron(self, C):
        """Block-level Kronecker product: every block ``B`` becomes ``kron(C, B)``.

        With node-major ordering this is the operator ``C (x) A`` acting on
        stacked stage vectors, without leaving block-tridiagonal form.
        """
        C = np.atleast_2d(np.asarray(C, dtype=float))
        k = lambda blocks: np.einsum("st,jab->jsatb", C, blocks).reshape(
            blocks.shape[0], C.shape[0] * blocks.shape[1], C.shape[1] * blocks.shape[2]
        )
        return BandedMatrix(k(self.lower), k(self.diag), k(self.upper))

    def norm_inf(self):
        rows = np.abs(self.diag).sum(axis=2)
        if self.n_blocks > 1:
            rows[:-1] += np.abs(self.upper).sum(axis=2)
            rows[1:] += np.abs(self.lower).sum(axis=2)
        return float(rows.max())


def block_kron_vector(c, X):
    """Stack ``c[s] * X`` over stages into node-major layout ``(n, len(c)*bs)``."""
    c = np.asarray(c, dtype=float)
    n, bs = X.shape
    return (c[None, :, None] * X[:, None, :]).reshape(n, c.size * bs)


@dataclass
class AssembledSystem:
    """One ready-to-solve implicit system.

    ``rhs`` is nodal, shape ``(n_blocks, block_size)``. ``dirichlet_dofs`` are
    flat indices whose rows are (or will be) identity rows with right-hand side
    ``dirichlet_values``.
    """

    matrix: BandedMatrix
    rhs: np.ndarray
    dirichlet_dofs: np.ndarray = None
    dirichlet_values: np.ndarray = None
    symmetric: bool = False

    def __post_init__(self):
        self.rhs = np.asarray(self.rhs, dtype=float).reshape(
            self.matrix.n_blocks, self.matrix.block_size
        )
        if self.dirichlet_dofs is None:
            self.dirichlet_dofs = np.zeros(0, dtype=int)
        if self.dirichlet_values is None:
            self.dirichlet_values = np.zeros(len(self.dirichlet_dofs))
        self.dirichlet_dofs = np.asarray(self.dirichlet_dofs, dtype=int)
        self.dirichlet_values = np.asarray(self.dirichlet_values, dtype=float)
