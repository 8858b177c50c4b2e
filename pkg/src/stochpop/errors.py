"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: config problems -> 2, numerical
failures -> 3, precondition/parameter violations -> 4.
"""


class StochpopError(Exception):
    """Base class for all package errors."""


class ParameterDomainError(StochpopError, ValueError):
    """A parameter lies outside its mathematical domain (e.g. alpha >= 2)."""


class SingularityError(StochpopError, ValueError):
    """An evaluation point hits a singularity of the requested quantity."""


class ConfigError(StochpopError, ValueError):
    """A run configuration is inconsistent (bad file, violated stability bound)."""


class NumericalError(StochpopError, RuntimeError):
    """A computation produced non-finite values or overflowed.

    ``step`` carries the time-step index at which the failure was detected,
    ``path`` the offending trajectory index where applicable.
    """

    def __init__(self, message: str, step: int | None = None, path: int | None = None):
        super().__init__(message)
        self.step = step
        self.path = path


class EmptySupportError(StochpopError, ValueError):
    """A density estimate was requested from an empty sample."""


class InsufficientDataError(StochpopError, ValueError):
    """An analysis needs more successful records than were supplied."""
