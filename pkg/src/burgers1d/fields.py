"""Nodal solution container."""
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError


@dataclass
class SolutionField:
    """Nodal values ``u`` and, for the least-squares formulation, ``v ~ u_x``."""

    u: np.ndarray
    v: np.ndarray = None

    def __post_init__(self):
        self.u = np.asarray(self.u, dtype=float)
        if self.u.ndim != 1:
            raise ConfigurationError("u must be a 1D nodal array")
        if self.v is not None:
            self.v = np.asarray(self.v, dtype=float)
            if self.v.shape != self.u.shape:
                raise ConfigurationError(
                    f"v has shape {self.v.shape}, expected {self.u.shape}"
                )

    def stacked(self):
        """``(n, 2)`` array of ``(u, v)`` pairs; ``v`` must be present."""
        if self.v is None:
            raise ConfigurationError("field carries no auxiliary derivative v")
        return np.column_stack([self.u, self.v])

    @classmethod
    def from_stacked(cls, U):
        U = np.asarray(U, dtype=float)
        return cls(U[:, 0].copy(), U[:, 1].copy())

    def copy(self):
        return SolutionField(self.u.copy(), None if self.v is None else self.v.copy())

    def is_finite(self):
        ok = bool(np.all(np.isfinite(self.u)))
        if self.v is not None:
            ok = ok and bool(np.all(np.isfinite(self.v)))
        return ok
