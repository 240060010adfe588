"""Exception types raised across the package."""


class TwoITError(Exception):
    """Base class for all package errors."""


class ValidationError(TwoITError, ValueError):
    """Invalid argument, malformed interval or inconsistent configuration."""


class NumericalError(TwoITError, ArithmeticError):
    """A numerical routine failed to converge or hit a degenerate case.

    ``diagnostics`` carries whatever state is useful for reproducing the
    failure (iteration count, last iterate, bracket, ...).
    """

    def __init__(self, message, **diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics

    def __str__(self):
        base = super().__str__()
        if not self.diagnostics:
            return base
        detail = ", ".join(f"{k}={v!r}" for k, v in sorted(self.diagnostics.items()))
        return f"{base} ({detail})"
