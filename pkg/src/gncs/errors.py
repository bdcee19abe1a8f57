"""Exception hierarchy shared by all modules."""


class GncsError(Exception):
    """Base class for every error raised by the package."""


class DomainError(GncsError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ShapeError(GncsError, ValueError):
    """Parameter lists have a shape the operation cannot handle."""


class RangeError(GncsError, ValueError):
    """An argument lies outside the numerically validated range."""


class UnsupportedError(GncsError, NotImplementedError):
    """The requested parameter combination is deliberately not supported."""


class ConvergenceError(GncsError, ArithmeticError):
    """A series or quadrature failed to reach the requested tolerance."""


class PrecisionError(GncsError, ArithmeticError):
    """The input state is truncated too coarsely for the requested quantity."""


class DivergenceError(GncsError, ValueError):
    """The coefficient series does not converge for the requested amplitude."""


class StatisticsError(GncsError, ArithmeticError):
    """Photon statistics are undefined (zero mean photon number)."""
