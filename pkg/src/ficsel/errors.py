"""Exception hierarchy.

The CLI maps these onto exit codes: ConfigError -> 1, DataError -> 2,
NumericalError (and subclasses) -> 3.
"""


class FicselError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(FicselError):
    """Invalid configuration, candidate specification, or usage."""


class DataError(FicselError):
    """Malformed or invalid input data."""


class NumericalError(FicselError):
    """Numerical failure: singularity, non-convergence, divergence."""


class RankDeficientError(NumericalError):
    """Design matrix is rank deficient at the configured tolerance."""


class SeparationError(NumericalError):
    """Logistic fit diverged (complete or quasi-complete separation)."""


class NonConvergenceError(NumericalError):
    """Optimizer failed to converge within the iteration budget."""
