"""Non-overlapping k-spacings of uniform samples.

Simulation of gamma-sum spacings, reduction to a uniform-type empirical
path, exact oscillation moduli at small bandwidths, and Monte Carlo
diagnostics for the iterated-logarithm and Erdos-Renyi limit regimes.
"""

__version__ = "0.1.0"

from .errors import (
    ConfigError,
    DomainError,
    KspacingsError,
    NumericError,
    PreconditionError,
    RegimeViolation,
    ResourceLimitError,
)

__all__ = [
    "ConfigError",
    "DomainError",
    "KspacingsError",
    "NumericError",
    "PreconditionError",
    "RegimeViolation",
    "ResourceLimitError",
    "__version__",
]
