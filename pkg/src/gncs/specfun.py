"""Special-function kernel.

Log-gamma arithmetic, generalised hypergeometric series, Laguerre
polynomials, the modified Bessel function K, and the Meijer G^{m,0}_{0,m}
function evaluated as a Mellin-Barnes integral along a vertical line.

Every gamma-function ratio in the package goes through :func:`log_gamma` or
:func:`log_pochhammer` so that nothing overflows for large arguments.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np
from scipy.optimize import brentq
from scipy.special import digamma, loggamma, polygamma

from ._quadrature import gauss_adaptive
from .errors import ConvergenceError, DomainError, ShapeError

PFQ_TERM_CAP = 10_000


def log_gamma(x: float) -> float:
    """ln Gamma(x) for x > 0."""
    if not x > 0:
        raise DomainError(f"log_gamma requires x > 0, got {x!r}")
    return math.lgamma(x)


def log_pochhammer(a: float, n: int) -> tuple[float, int]:
    """Return ``(ln|(a)_n|, sign((a)_n))`` for the rising factorial."""
    if n < 0:
        raise DomainError(f"Pochhammer length must be nonnegative, got {n}")
    if n == 0:
        return 0.0, 1
    logabs = 0.0
    sign = 1
    k = 0
    # explicit product while factors can be nonpositive
    while k < n and a + k <= 0:
        factor = a + k
        if factor == 0:
            raise DomainError(f"(a)_n has a zero factor: a={a!r}, n={n}")
        logabs += math.log(-factor)
        sign = -sign
        k += 1
    if k < n:
        logabs += math.lgamma(a + n) - math.lgamma(a + k)
    return logabs, sign


def _is_nonpositive_integer(x: float) -> bool:
    return x <= 0 and float(x).is_integer()


@dataclass(frozen=True)
class PfqParams:
    """Parameter block of pFq([numerator]; [denominator]; argument)."""

    numerator: tuple[float, ...]
    denominator: tuple[float, ...]
    argument: complex

    def __init__(self, numerator: Sequence[float], denominator: Sequence[float], argument: complex):
        object.__setattr__(self, "numerator", tuple(float(a) for a in numerator))
        object.__setattr__(self, "denominator", tuple(float(b) for b in denominator))
        object.__setattr__(self, "argument", complex(argument))
        self.validate()

    def validate(self) -> None:
        for b in self.denominator:
            if _is_nonpositive_integer(b):
                raise DomainError(f"denominator parameter {b} is a pole of the series")
        if self.terminates or self.argument == 0:
            return
        p, q = len(self.numerator), len(self.denominator)
        if p > q + 1:
            raise ShapeError(f"{p}F{q} diverges for nonzero argument")
        if p == q + 1 and abs(self.argument) >= 1:
            raise ShapeError(f"{p}F{q} requires |argument| < 1, got {abs(self.argument)}")

    @property
    def terminates(self) -> bool:
        return any(_is_nonpositive_integer(a) for a in self.numerator)


@dataclass(frozen=True)
class SeriesResult:
    value: complex
    terms_used: int
    tail_bound: float  # relative to |value|


def _pfq_terms(params: PfqParams) -> Iterator[tuple[complex, float]]:
    """Yield ``(term_k, |term_{k+1} / term_k|)`` with log-domain magnitude updates."""
    a = params.numerator
    b = params.denominator
    x = params.argument
    log_abs_x = math.log(abs(x)) if x != 0 else -math.inf
    phase_x = cmath.exp(1j * cmath.phase(x)) if x != 0 else 0.0
    log_mag = 0.0
    phase: complex = 1.0
    k = 0
    while True:
        term = phase * math.exp(log_mag)
        num = [ai + k for ai in a]
        den = [bj + k for bj in b]
        if x == 0 or any(v == 0 for v in num):
            yield term, 0.0
            return
        log_ratio = log_abs_x - math.log(k + 1)
        sign = 1
        for v in num:
            log_ratio += math.log(abs(v))
            sign = -sign if v < 0 else sign
        for v in den:
            log_ratio -= math.log(abs(v))
            sign = -sign if v < 0 else sign
        yield term, math.exp(log_ratio)
        log_mag += log_ratio
        phase = phase * phase_x * sign
        k += 1


def pfq_term(params: PfqParams, n: int) -> complex:
    """The n-th series term evaluated directly from Pochhammer symbols."""
    log_mag = -math.lgamma(n + 1)
    sign = 1
    for a in params.numerator:
        la, sa = log_pochhammer(a, n)
        log_mag += la
        sign *= sa
    for b in params.denominator:
        lb, sb = log_pochhammer(b, n)
        log_mag -= lb
        sign *= sb
    x = params.argument
    if n == 0:
        return complex(sign * math.exp(log_mag))
    if x == 0:
        return 0j
    return sign * cmath.exp(log_mag + n * cmath.log(x))


def pfq(params: PfqParams, tolerance: float = 1e-15) -> SeriesResult:
    """Sum the generalised hypergeometric series to relative ``tolerance``.

    The tail is bounded geometrically from the current term ratio once all
    shifted parameters are positive, where the ratio is monotone.
    """
    params.validate()
    p, q = len(params.numerator), len(params.denominator)
    limit_ratio = abs(params.argument) if p == q + 1 else 0.0
    shift = max([0.0] + [-v for v in (*params.numerator, *params.denominator)])
    total = 0j
    comp = 0j  # Kahan compensation
    for k, (term, ratio) in enumerate(_pfq_terms(params)):
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
        if ratio == 0.0:
            return SeriesResult(total, k + 1, 0.0)
        if k >= shift:
            rho = max(ratio, limit_ratio)
            if rho < 1.0:
                tail = abs(term) * rho / (1.0 - rho)
                scale = abs(total)
                if tail <= tolerance * scale:
                    return SeriesResult(total, k + 1, tail / scale if scale else 0.0)
        if k + 1 >= PFQ_TERM_CAP:
            break
    raise ConvergenceError(f"pFq did not reach tolerance {tolerance} within {PFQ_TERM_CAP} terms")


def hyp(numerator: Sequence[float], denominator: Sequence[float], x: complex, tolerance: float = 1e-15) -> complex:
    """Shorthand returning only the value of :func:`pfq`."""
    return pfq(PfqParams(numerator, denominator, x), tolerance).value


def laguerre(n: int, alpha: float, x):
    """Associated Laguerre polynomial L_n^alpha(x) by the three-term recurrence.

    Accepts scalar or array ``x``.
    """
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if n == 0:
        return prev if prev.ndim else float(prev)
    cur = 1.0 + alpha - x
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 + alpha - x) * cur - (k + alpha) * prev) / (k + 1)
    return cur if cur.ndim else float(cur)


def laguerre_table(n_max: int, alpha: float, x) -> np.ndarray:
    """Rows L_0^alpha(x) ... L_{n_max}^alpha(x), shape ``(n_max + 1, *x.shape)``."""
    x = np.asarray(x, dtype=float)
    out = np.empty((n_max + 1, *x.shape))
    out[0] = 1.0
    if n_max >= 1:
        out[1] = 1.0 + alpha - x
    for k in range(1, n_max):
        out[k + 1] = ((2 * k + 1 + alpha - x) * out[k] - (k + alpha) * out[k - 1]) / (k + 1)
    return out


def bessel_k(nu: float, x: float, rtol: float = 1e-12) -> float:
    """Modified Bessel function K_nu(x) from int_0^inf exp(-x cosh u) cosh(nu u) du."""
    if not x > 0:
        raise DomainError(f"bessel_k requires x > 0, got {x!r}")
    nu = abs(nu)

    def log_integrand(u):
        return -x * (np.cosh(u) - 1.0) + nu * u

    # cut where the scaled integrand is below 1e-18 of its peak
    peak_u = math.asinh(nu / x)
    peak = float(log_integrand(peak_u))
    upper = max(peak_u, 1.0)
    while float(log_integrand(upper)) > peak - 42.0:
        upper *= 1.5

    def f(u):
        return np.exp(-x * (np.cosh(u) - 1.0)) * np.cosh(nu * u)

    scaled = gauss_adaptive(f, 0.0, upper, rtol=rtol, breakpoints=(peak_u,))
    return math.exp(-x) * scaled


@dataclass(frozen=True)
class MellinWeight:
    """Meijer G^{m,0}_{0,m}(t | b_list) scaled by ``normalization``.

    ``contour_abscissa=None`` puts the integration line through the real
    saddle point of the integrand for each t; a number fixes it.
    """

    b_list: tuple[float, ...]
    normalization: float = 1.0
    contour_abscissa: float | None = None
    _b: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "b_list", tuple(float(b) for b in self.b_list))
        if len(self.b_list) < 2:
            raise ShapeError("Meijer G^{m,0}_{0,m} needs m >= 2 for a decaying contour")
        if not self.normalization > 0:
            raise DomainError("normalization must be positive")
        c = self.contour_abscissa
        if c is not None and not c > -min(self.b_list):
            raise DomainError(f"contour abscissa {c} must exceed -min(b) = {-min(self.b_list)}")
        object.__setattr__(self, "_b", np.array(self.b_list))

    @property
    def default_abscissa(self) -> float:
        return 1.0 + max(0.0, -min(self.b_list))

    def abscissa(self, t: float) -> float:
        if self.contour_abscissa is not None:
            return self.contour_abscissa
        return saddle_abscissa(self._b, math.log(t))


def saddle_abscissa(b: np.ndarray, log_t: float, margin: float = 0.25) -> float:
    """Real s where d/ds [sum log Gamma(b+s) - s log t] = 0, kept ``margin`` right of the poles."""
    lo = -float(np.min(b)) + margin

    def slope(c):
        return float(np.sum(digamma(b + c))) - log_t

    if slope(lo) >= 0:
        return lo
    hi = lo + 1.0
    while slope(hi) < 0:
        hi = lo + 2.0 * (hi - lo)
    return brentq(slope, lo, hi, xtol=1e-12)


def _log_gamma_product(b: np.ndarray, s: np.ndarray) -> np.ndarray:
    return np.sum(loggamma(b + s[..., None]), axis=-1)


def _cutoff(b: np.ndarray, c: float, tolerance: float) -> float:
    """|u| beyond which |prod Gamma(b+c+iu)| < tolerance * peak."""
    peak = float(np.sum(loggamma(b + c)).real)
    target = peak + math.log(tolerance)
    u = 1.0
    while float(_log_gamma_product(b, np.array(c + 1j * u)).real) > target:
        u *= 1.25
    return u


def _graded_panels(u_max: float, first: float, widest: float = 1.0) -> np.ndarray:
    """Panel edges on [0, u_max]: widths double from ``first`` up to ``widest``."""
    edges = [0.0]
    w = first
    while edges[-1] < u_max:
        edges.append(min(edges[-1] + w, u_max))
        w = min(2.0 * w, widest)
    return np.array(edges)


def _panel_nodes(edges: np.ndarray, order: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(order)
    lo, hi = edges[:-1, None], edges[1:, None]
    half = 0.5 * (hi - lo)
    return (lo + half * (x + 1.0)).ravel(), (half * w).ravel()


def mellin_barnes(b, t, kernel=None, c=None, tolerance: float = 1e-16,
                  rtol: float = 1e-13, check_imag: bool = False, order: int = 16):
    """(1/2 pi i) int prod_j Gamma(b_j + s) t^{-s} kernel(s) ds along Re s = c.

    Vectorised over ``t``.  ``c`` may be a scalar, an array matching ``t``, or
    None for the per-t saddle point.  ``kernel(s)`` must satisfy
    kernel(conj s) = conj kernel(s), which makes the integral real.  The
    u-integral uses Gauss-Legendre panels graded around u = 0 and is refined
    by panel halving until successive estimates agree to ``rtol``.
    """
    b = np.asarray(b, dtype=float)
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    log_t = np.log(t_arr)
    if c is None:
        c_arr = np.array([saddle_abscissa(b, lt) for lt in log_t])
    else:
        c_arr = np.broadcast_to(np.asarray(c, dtype=float), t_arr.shape).copy()
    out = np.empty_like(t_arr)
    for i, (lt, ci) in enumerate(zip(log_t, c_arr)):
        u_max = _cutoff(b, ci, tolerance)
        width = 1.0 / math.sqrt(float(np.sum(polygamma(1, b + ci))))
        edges = _graded_panels(u_max, first=min(0.5, width / 4), widest=max(1.0, width))
        prev = None
        for _ in range(8):
            u, w = _panel_nodes(edges, order)
            s = ci + 1j * u
            f = np.exp(_log_gamma_product(b, s) - s * lt)
            if kernel is not None:
                f = f * kernel(s)
            if check_imag:
                sm = ci - 1j * u
                fm = np.exp(_log_gamma_product(b, sm) - sm * lt)
                if kernel is not None:
                    fm = fm * kernel(sm)
                val = complex(np.dot(w, f + fm))
            else:
                val = complex(2.0 * np.dot(w, f.real))
            scale = float(np.dot(w, np.abs(f)))
            if prev is not None and abs(val.real - prev.real) <= max(rtol * abs(val.real), 1e-15 * scale):
                break
            prev = val
            edges = np.sort(np.concatenate([edges, 0.5 * (edges[:-1] + edges[1:])]))
        else:
            raise ConvergenceError(f"Mellin-Barnes integral did not converge at t={math.exp(lt):.6g}")
        if check_imag and abs(val.imag) > 1e-10 * abs(val.real) and abs(val.imag) > 1e-14 * scale:
            raise ConvergenceError(f"Mellin-Barnes integral has imaginary residue {abs(val.imag):.3e}")
        out[i] = val.real / (2.0 * math.pi)
    return out if np.ndim(t) else float(out[0])


def meijer_g_weight(w: MellinWeight, t: float, tolerance: float = 1e-16) -> float:
    """normalization * G^{m,0}_{0,m}(t | b_list) by Mellin-Barnes quadrature.

    ``tolerance`` sets where the gamma-product modulus is cut relative to its
    peak on the contour.
    """
    if not t > 0:
        raise DomainError(f"Meijer G weight requires t > 0, got {t!r}")
    value = mellin_barnes(w._b, t, c=w.abscissa(t), tolerance=tolerance, check_imag=True)
    if value < 0 and abs(value) > 1e-13 * w.normalization:
        raise ConvergenceError(f"Meijer G weight came out negative ({value:.3e}) at t={t}")
    return w.normalization * max(value, 0.0)
