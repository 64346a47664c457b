"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the supported evaluation domain."""


class ConfigurationError(ValueError):
    """A grid, step size or run setting cannot produce a meaningful result."""


class NumericalBlowUpError(ArithmeticError):
    """A time integration produced non-finite values."""
