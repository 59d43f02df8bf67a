"""Exception hierarchy."""


class AuxFieldError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(AuxFieldError, ValueError):
    """Argument outside the domain where the quantity is defined."""


class SingularityError(AuxFieldError, ZeroDivisionError):
    """``P'(r)`` vanishes where a ratio by it is required."""


class MonotonicityError(AuxFieldError):
    """``K = V'/P'`` is not strictly monotone, so it has no inverse."""


class NoExtremumError(AuxFieldError):
    """The energy functional has no interior stationary point."""


class ConvergenceError(AuxFieldError):
    """The radial eigensolver missed its accuracy target."""


class NodeCountError(AuxFieldError):
    """The computed eigenvector does not have the expected number of nodes."""
