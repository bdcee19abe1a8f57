"""Resolution-of-identity weight for r >= 2.

With t = |z|^2, the states resolve the identity when the weight w(t)
(measure K/M times pi, phase integrated out) has power moments

    int_0^inf t^n w(t) dt = n! prod_{k=1}^{r-1} [(lam+k-1/2)_n]^2 / (lam+1/2)_n.

That moment sequence is the Mellin transform of a Meijer G^{m,0}_{0,m}
function with b = (0, lam-1/2, lam+1/2, lam+1/2, ..., lam+r-5/2, lam+r-5/2)
(m = 2r - 2), up to a constant fixed here by the zeroth moment.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebra import AlgebraParams
from .errors import ConvergenceError, RangeError, UnsupportedError
from .specfun import MellinWeight, log_gamma, log_pochhammer, meijer_g_weight, mellin_barnes, saddle_abscissa

T_MIN = 1e-3
T_MAX = 25.0


def b_list(p: AlgebraParams) -> tuple[float, ...]:
    if p.r < 2:
        raise UnsupportedError(
            "r = 1 states live on the unit disk; no half-line Mellin weight is provided"
        )
    out = [0.0, p.lam - 0.5]
    for k in range(1, p.r - 1):
        out += [p.lam + k - 0.5] * 2
    return tuple(out)


def anchored_normalization(p: AlgebraParams) -> float:
    """1 / prod_j Gamma(b_j + 1), so that the zeroth moment equals one."""
    return math.exp(-sum(log_gamma(b + 1.0) for b in b_list(p)))


def printed_normalization(p: AlgebraParams) -> float:
    """pi times the printed prefactor of the measure: 2 Gamma(lam+1/2) / [prod_k Gamma(lam+k-1/2)]^2."""
    log_prod = sum(log_gamma(p.lam + k - 0.5) for k in range(1, p.r))
    return 2.0 * math.exp(log_gamma(p.lam + 0.5) - 2.0 * log_prod)


def prefactor_ratio(p: AlgebraParams) -> float:
    """Printed prefactor over the moment-anchored constant (diagnostic)."""
    return printed_normalization(p) / anchored_normalization(p)


def mellin_weight(p: AlgebraParams) -> MellinWeight:
    return MellinWeight(b_list(p), normalization=anchored_normalization(p))


def weight(p: AlgebraParams, t: float) -> float:
    """w(t) on the validated range [1e-3, 25]."""
    if not T_MIN <= t <= T_MAX:
        raise RangeError(f"weight is validated on [{T_MIN}, {T_MAX}], got t = {t}")
    return meijer_g_weight(mellin_weight(p), t)


def weight_unchecked(p: AlgebraParams, t) -> np.ndarray:
    """Vectorised w(t) for any t > 0 (saddle-point contour, no range check)."""
    return anchored_normalization(p) * mellin_barnes(np.array(b_list(p)), t)


@dataclass(frozen=True)
class MomentTarget:
    n: int
    target: float


def moment_target(p: AlgebraParams, n: int) -> MomentTarget:
    """1/rho_n = n! prod_{k=1}^{r-1} [(lam+k-1/2)_n]^2 / (lam+1/2)_n."""
    log_t = math.lgamma(n + 1) - log_pochhammer(p.lam + 0.5, n)[0]
    for k in range(1, p.r):
        log_t += 2.0 * log_pochhammer(p.lam + k - 0.5, n)[0]
    return MomentTarget(n, math.exp(log_t))


@dataclass(frozen=True)
class MomentCheck:
    n: int
    target: float
    head: float  # int_0^{T_MIN}
    body: float  # int_{T_MIN}^{T_MAX}, quadrature of the pointwise weight
    tail: float  # int_{T_MAX}^inf
    total: float
    rel_error: float

    @property
    def body_fraction(self) -> float:
        return self.body / self.total


def _head_moment(p: AlgebraParams, n: int, eps: float) -> float:
    """int_0^eps t^n w dt as a Mellin-Barnes integral with kernel eps^{n+1}/(n+1-s)."""
    b = np.array(b_list(p))
    lo, hi = -float(b.min()), n + 1.0
    c = min(max(saddle_abscissa(b, math.log(eps)), lo + 0.25 * (hi - lo)), lo + 0.75 * (hi - lo))
    val = mellin_barnes(b, eps, kernel=lambda s: eps ** (n + 1) / (n + 1 - s), c=c)
    return anchored_normalization(p) * val


def _tail_moment(p: AlgebraParams, n: int, cut: float) -> float:
    """int_cut^inf t^n w dt with kernel cut^{n+1}/(s-n-1), contour right of s = n+1."""
    b = np.array(b_list(p))
    c = max(saddle_abscissa(b, math.log(cut)), n + 1.5)
    val = mellin_barnes(b, cut, kernel=lambda s: cut ** (n + 1) / (s - n - 1), c=c)
    return anchored_normalization(p) * val


def _composite_moments(g, edges: np.ndarray, powers: np.ndarray, rtol: float, order: int = 20,
                       max_splits: int = 7) -> np.ndarray:
    """int t^k g(t) dt for every k in ``powers`` over the panels ``edges``.

    Every panel is halved until two successive composite estimates agree to
    ``rtol`` for all powers at once, so each weight value serves all moments.
    """
    x, w = np.polynomial.legendre.leggauss(order)
    prev = None
    for _ in range(max_splits):
        lo, hi = edges[:-1, None], edges[1:, None]
        half = 0.5 * (hi - lo)
        nodes = (lo + half * (x + 1.0)).ravel()
        weights = (half * w).ravel()
        vals = g(nodes)
        est = np.array([math.fsum((weights * nodes**k * vals).tolist()) for k in powers])
        if prev is not None and np.all(np.abs(est - prev) <= rtol * np.abs(est)):
            return est
        prev = est
        edges = np.sort(np.concatenate([edges, 0.5 * (edges[:-1] + edges[1:])]))
    raise ConvergenceError("moment quadrature did not converge")


def _dyadic_edges(lo: float, hi: float) -> np.ndarray:
    out = [lo]
    while out[-1] * 2 < hi:
        out.append(out[-1] * 2)
    out.append(hi)
    return np.array(out)


def verify_moments(p: AlgebraParams, n_list=(0, 1, 2, 3), tolerance: float = 1e-11) -> list[MomentCheck]:
    """Moments of the weight against their targets.

    The pointwise weight is integrated over [1e-3, 25] with Gauss rules on
    dyadic panels refined by bisection; the pieces below 1e-3 and above 25 are
    incomplete Mellin transforms evaluated on their own contours.
    """
    mw = mellin_weight(p)
    b = np.array(mw.b_list)
    n_arr = np.asarray(list(n_list), dtype=int)
    bodies = _composite_moments(lambda t: mw.normalization * mellin_barnes(b, t),
                                _dyadic_edges(T_MIN, T_MAX), n_arr, tolerance)
    out = []
    for n, body in zip(n_arr, bodies):
        n = int(n)
        head = _head_moment(p, n, T_MIN)
        tail = _tail_moment(p, n, T_MAX)
        total = head + float(body) + tail
        target = moment_target(p, n).target
        out.append(MomentCheck(n, target, head, float(body), tail, total, abs(total / target - 1.0)))
    return out


def moments_full_range(p: AlgebraParams, n_list=(0, 1, 2, 3), rtol: float = 1e-11) -> np.ndarray:
    """int_0^inf t^n w(t) dt by quadrature of the pointwise weight alone.

    Works in x = ln t.  The x-range is grown in steps of 2 from the peak of
    t^{n+1} w(t) until the integrand falls below 1e-16 of that peak on both
    sides for every requested n.  Below t = e^-36 the weight is bounded, so
    what is dropped there is under 1e-15 of any moment with peak t >= 1e-3.
    """
    mw = mellin_weight(p)
    b = np.array(mw.b_list)
    n_arr = np.asarray(list(n_list), dtype=int)

    def w_of_x(x):
        return mw.normalization * mellin_barnes(b, np.exp(x))

    def negligible(x, peak):
        v = w_of_x(x)
        return all(math.exp((k + 1) * x) * v <= 1e-16 * pk for k, pk in zip(n_arr, peak))

    probe = np.arange(-10.0, 12.0, 2.0)
    wv = w_of_x(probe)
    peak = [float(np.max(np.exp((k + 1) * probe) * wv)) for k in n_arr]
    lo, hi = -10.0, 10.0
    while lo > -36.0 and not negligible(lo, peak):
        lo -= 2.0
    while not negligible(hi, peak):
        hi += 2.0
        if hi > 200:
            raise ConvergenceError("moment integrand does not decay in log t")
    edges = np.arange(lo, hi + 1.0, 2.0)

    def g(x):
        return np.exp(x) * w_of_x(x)

    # t^k dt = e^{k x} e^x dx
    return _composite_moments_log(g, edges, n_arr, rtol)


def _composite_moments_log(g, edges, powers, rtol, order: int = 20, max_splits: int = 7):
    x, w = np.polynomial.legendre.leggauss(order)
    prev = None
    for _ in range(max_splits):
        lo, hi = edges[:-1, None], edges[1:, None]
        half = 0.5 * (hi - lo)
        nodes = (lo + half * (x + 1.0)).ravel()
        weights = (half * w).ravel()
        vals = g(nodes)
        est = np.array([math.fsum((weights * np.exp(k * nodes) * vals).tolist()) for k in powers])
        if prev is not None and np.all(np.abs(est - prev) <= rtol * np.abs(est)):
            return est
        prev = est
        edges = np.sort(np.concatenate([edges, 0.5 * (edges[:-1] + edges[1:])]))
    raise ConvergenceError("log-t moment quadrature did not converge")


def curve(p: AlgebraParams, ts) -> np.ndarray:
    """Weight on a grid inside the validated range."""
    ts = np.asarray(ts, dtype=float)
    if ts.size and (ts.min() < T_MIN or ts.max() > T_MAX):
        raise RangeError(f"weight is validated on [{T_MIN}, {T_MAX}]")
    return weight_unchecked(p, ts)
