"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: ConfigError -> 2, DataError -> 3,
NumericalError -> 4.
"""


class VoikitError(Exception):
    """Base class for all voikit errors."""


class ConfigError(VoikitError, ValueError):
    """Invalid configuration, argument domain violation, or bad grid."""


class DataError(VoikitError, ValueError):
    """Malformed, degenerate, or insufficient input data."""


class NumericalError(VoikitError, ArithmeticError):
    """A numerical procedure failed (non-PD factorization, diverged training)."""
