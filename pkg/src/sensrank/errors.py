"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes (input 2, config 3, numeric 4), so
library code should raise the most specific one that applies.
"""


class SensrankError(Exception):
    """Base class for all package errors."""


class InputError(SensrankError):
    """Malformed or unusable input data (bad CSV, non-finite values, ...)."""


class ConfigError(SensrankError):
    """Invalid parameter values (gamma < 1, alpha outside (0,1), ...)."""


class NumericError(SensrankError):
    """A numerical routine failed to converge to its stated tolerance."""
