"""Exception hierarchy shared across the package."""


class BurgersError(Exception):
    """Base class for all errors raised by burgers1d."""


class ConfigurationError(BurgersError, ValueError):
    """Invalid user-supplied parameter or configuration."""


class DomainError(BurgersError, ValueError):
    """Argument outside the domain where a function is defined."""


class PoleError(BurgersError, ZeroDivisionError):
    """Rational approximant evaluated at (or next to) a pole."""


class AssemblyError(BurgersError, ValueError):
    """Operators or vectors with inconsistent layouts."""


class SingularSystemError(BurgersError, ArithmeticError):
    """A pivot block of the block-tridiagonal elimination is numerically singular."""

    def __init__(self, pivot_index, message=None):
        self.pivot_index = int(pivot_index)
        super().__init__(message or f"singular pivot block at block row {self.pivot_index}")


class SolverFailure(BurgersError, RuntimeError):
    """Linear solve failed during time stepping."""

    def __init__(self, step, cause):
        self.step = int(step)
        self.cause = cause
        super().__init__(f"linear solve failed at step {self.step}: {cause}")


class DivergenceError(BurgersError, FloatingPointError):
    """The discrete state became non-finite."""

    def __init__(self, step):
        self.step = int(step)
        super().__init__(f"non-finite state detected after step {self.step}")
