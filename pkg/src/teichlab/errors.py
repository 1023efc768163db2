"""Exception types raised by teichlab."""


class TeichLabError(Exception):
    """Base class for all teichlab errors."""


class InvalidBoxError(TeichLabError, ValueError):
    """Quadruple of boundary points that is degenerate or not counterclockwise."""


class AccuracyError(TeichLabError):
    """A numerical routine could not reach the requested tolerance.

    The best available estimate is kept in ``estimate`` and the achieved
    error bound in ``achieved``.
    """

    def __init__(self, message, estimate=None, achieved=None):
        super().__init__(message)
        self.estimate = estimate
        self.achieved = achieved


class ResolutionError(TeichLabError):
    """The sampling or mesh resolution is too coarse for the geometry."""


class NonTerminatingTrajectoryError(TeichLabError):
    """A trajectory did not reach the boundary shell within its step budget."""


class ChartInjectivityError(TeichLabError):
    """The image of the boundary circle under a chart self-intersects."""


class ConfigError(TeichLabError, ValueError):
    """A configuration document failed validation."""

    def __init__(self, message, path="$"):
        super().__init__(f"{path}: {message}")
        self.path = path
