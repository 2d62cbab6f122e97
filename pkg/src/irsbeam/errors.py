"""Exception types shared across the package."""


class IrsbeamError(Exception):
    """Base class for all library errors."""


class InvalidInputError(IrsbeamError, ValueError):
    """An argument violates a documented precondition (shape, range, count)."""


class DimensionMismatchError(InvalidInputError):
    """Vectors or matrices disagree on the antenna or element count."""


class DegenerateChannelError(IrsbeamError, ValueError):
    """An operation that needs a nonzero channel received a zero one."""


class DegenerateSolutionError(IrsbeamError, ValueError):
    """A recovered solution is unusable (e.g. vanishing homogenization entry)."""


class OutOfModelError(IrsbeamError, ValueError):
    """Inputs fall outside the validity region of the propagation model."""


class ConvergenceFailureError(IrsbeamError, RuntimeError):
    """An iterative solve hit its iteration cap before stabilizing.

    Attributes
    ----------
    best : the best iterate found so far (solver-specific), or None.
    residuals : dict of diagnostic residuals at the point of failure.
    """

    def __init__(self, message, best=None, residuals=None):
        super().__init__(message)
        self.best = best
        self.residuals = dict(residuals or {})


class ConfigError(IrsbeamError, ValueError):
    """A sweep configuration is invalid; ``key`` names the offending entry."""

    def __init__(self, message, key=None):
        super().__init__(message)
        self.key = key
