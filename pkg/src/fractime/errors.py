"""Exception types shared across the toolkit."""


class FractimeError(Exception):
    """Base class for all toolkit errors."""


class DomainError(FractimeError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class PoleError(DomainError):
    """Evaluation requested exactly at a pole."""


class ConfigError(FractimeError, ValueError):
    """Invalid configuration (term counts, grids, model parameters)."""


class InversionError(FractimeError, ArithmeticError):
    """Numerical Laplace inversion failed (non-finite contour values etc.)."""

    def __init__(self, message, t=None):
        super().__init__(message)
        self.t = t


class ConvergenceError(FractimeError, ArithmeticError):
    """A series or quadrature failed to converge within its budget."""


class UnsupportedModelError(FractimeError, ValueError):
    """Operation not defined for this subordinator model."""


class UnsupportedDynamicError(FractimeError, ValueError):
    """Operation not defined for this dynamic."""
