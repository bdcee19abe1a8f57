"""Adaptive Gauss-Legendre quadrature on finite intervals.

Small vectorised workhorse used by the Bessel, Mellin-Barnes and moment
integrals.  Each panel is accepted when the n-point rule on the panel agrees
with the sum of the n-point rules on its two halves.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from .errors import ConvergenceError

_NODES: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _rule(order: int) -> tuple[np.ndarray, np.ndarray]:
    if order not in _NODES:
        _NODES[order] = np.polynomial.legendre.leggauss(order)
    return _NODES[order]


def _panel(f, a: float, b: float, order: int) -> float:
    x, w = _rule(order)
    half = 0.5 * (b - a)
    return half * float(np.dot(w, f(a + half * (x + 1.0))))


def gauss_adaptive(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    rtol: float = 1e-12,
    atol: float = 0.0,
    order: int = 20,
    max_depth: int = 40,
    breakpoints=(),
) -> float:
    """Integrate a vectorised ``f`` over ``[a, b]``.

    ``breakpoints`` split the interval before refinement starts; the global
    tolerance is ``max(atol, rtol * |coarse estimate|)``.
    """
    edges = [a, *sorted(p for p in breakpoints if a < p < b), b]
    stack = [(lo, hi, 0) for lo, hi in zip(edges[:-1], edges[1:])]
    coarse = sum(_panel(f, lo, hi, order) for lo, hi, _ in stack)
    tol = max(atol, rtol * abs(coarse))
    total_width = b - a
    parts: list[float] = []
    while stack:
        lo, hi, depth = stack.pop()
        mid = 0.5 * (lo + hi)
        whole = _panel(f, lo, hi, order)
        left = _panel(f, lo, mid, order)
        right = _panel(f, mid, hi, order)
        share = tol * (hi - lo) / total_width
        if abs(left + right - whole) <= max(share, 1e-300) or (tol == 0.0 and left + right == whole):
            parts.append(left + right)
        elif depth >= max_depth:
            raise ConvergenceError(
                f"adaptive quadrature did not converge on [{lo:.6g}, {hi:.6g}]"
            )
        else:
            stack.append((mid, hi, depth + 1))
            stack.append((lo, mid, depth + 1))
    return math.fsum(parts)
