"""Exception taxonomy shared across the package."""

__all__ = [
    "KspacingsError",
    "DomainError",
    "PreconditionError",
    "RegimeViolation",
    "ConfigError",
    "ResourceLimitError",
    "NumericError",
]


class KspacingsError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(KspacingsError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class PreconditionError(KspacingsError, ValueError):
    """A documented precondition of an operation does not hold."""


class RegimeViolation(PreconditionError):
    """A bandwidth/order schedule violates the regime it claims to satisfy."""


class ConfigError(KspacingsError, ValueError):
    """An experiment configuration is malformed."""


class ResourceLimitError(KspacingsError, RuntimeError):
    """A requested computation exceeds the configured size budget."""


class NumericError(KspacingsError, ArithmeticError):
    """An iterative numerical routine failed to converge."""
