"""su(1,1) generalized nonlinear coherent states of the half-line oscillator.

Fock-space construction, resolution-of-identity weights, position-space
wavefunctions and non-classical statistics.
"""

from .algebra import AlgebraParams, build_truncated
from .errors import (
    ConvergenceError, DivergenceError, DomainError, GncsError, PrecisionError, RangeError,
    ShapeError, StatisticsError, UnsupportedError,
)
from .states import FockCoefficients, GncsSpec, build_state

__all__ = [
    "AlgebraParams", "build_truncated", "GncsSpec", "FockCoefficients", "build_state",
    "GncsError", "DomainError", "ShapeError", "RangeError", "UnsupportedError", "ConvergenceError",
    "PrecisionError", "DivergenceError", "StatisticsError",
]

__version__ = "0.1.0"
