"""Exception hierarchy shared across the package."""


class SepkitError(Exception):
    """Base class for all sepkit errors."""


class ParameterError(SepkitError, ValueError):
    """A parameter violates its documented domain."""


class InsufficientDataError(SepkitError):
    """Too few samples for the requested statistic."""


class DegenerateDataError(SepkitError):
    """Data carries no usable variance (all eigenvalues numerically zero)."""


class DegenerateDirectionError(SepkitError):
    """The class means coincide; no discriminant direction exists."""


class NumericalError(SepkitError):
    """A numerical routine failed (non-convergence, singular system)."""


class SingularityError(NumericalError):
    """Matrix not invertible at the requested ridge; caller should regularize."""


class DimensionMismatchError(SepkitError, ValueError):
    """Input dimension does not match the model or point set."""


class ResampleExhaustedError(SepkitError):
    """Rejection sampling hit its attempt cap before satisfying a constraint."""

    def __init__(self, message: str, attempts: int):
        super().__init__(message)
        self.attempts = attempts
