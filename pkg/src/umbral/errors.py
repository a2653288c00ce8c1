"""Exception and warning types shared across the package."""


class UmbralError(Exception):
    """Base class for all package errors."""


class InvalidParameterError(UmbralError, ValueError):
    pass


class DomainError(UmbralError, ValueError):
    """Evaluation point outside the domain of a profile or operator."""


class SingularPointError(DomainError):
    """Coefficient functions are singular at the requested point."""


class QuadratureError(UmbralError, RuntimeError):
    pass


class NonConvergentLimitError(UmbralError, RuntimeError):
    pass


class StepSizeUnderflowError(UmbralError, RuntimeError):
    pass


class GridTooCoarseError(UmbralError, ValueError):
    pass


class TruncationError(UmbralError, RuntimeError):
    """Series tail exceeds the caller's tolerance."""


class TruncationWarning(UserWarning):
    pass
