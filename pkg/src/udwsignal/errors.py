"""Exception types raised across the package."""


class UDWError(Exception):
    """Base class for all package errors."""


class DomainError(UDWError, ValueError):
    """An argument lies outside the domain of a function."""


class PoleError(DomainError):
    """Evaluation at a pole or logarithmic singularity."""


class ConfigurationError(UDWError, ValueError):
    """A scenario or detector is configured in an unsupported way."""


class NoSignalError(UDWError):
    """Both signaling coefficients vanish, so no optimal state exists."""


class NumericalError(UDWError, RuntimeError):
    """A root finder or series failed to converge.

    ``state`` carries whatever diagnostic data the failing routine had
    (bracket end points, partial sums, ...).
    """

    def __init__(self, message, state=None):
        super().__init__(message)
        self.state = state


class AccuracyError(NumericalError):
    """Requested tolerance not reached; ``best`` holds the best estimate."""

    def __init__(self, message, best=None, error=None):
        super().__init__(message, state={"best": best, "error": error})
        self.best = best
        self.error = error
