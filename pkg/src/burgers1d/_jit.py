"""Optional numba acceleration.

Kernels are written once in plain-loop style. When numba is importable and the
environment variable ``BURGERS1D_DISABLE_NUMBA`` is unset (or ``0``), they are
compiled with ``numba.njit``; otherwise callers fall back to the numpy paths.
"""
import os

_flag = os.environ.get("BURGERS1D_DISABLE_NUMBA", "0").strip().lower()
_disabled = _flag not in ("", "0", "false", "no")

try:
    if _disabled:
        raise ImportError
    import numba
except ImportError:  # pragma: no cover - depends on environment
    numba = None

NUMBA_ENABLED = numba is not None


def njit(func):
    """``numba.njit(cache=True)`` when available, identity otherwise."""
    if numba is None:
        return func
    return numba.njit(cache=True)(func)
