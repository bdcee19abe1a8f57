"""Generator moments, quadrature squeezing and photon statistics.

Moments come from direct sums over the Fock amplitudes, which are the
reference values.  The hypergeometric closed forms are available in two
readings: ``printed=True`` evaluates the reference expressions as quoted
(their parameter lists are unambiguous for r = 2, 3 only), ``printed=False``
uses forms re-derived from the amplitudes.  Where the quoted forms and the
sums disagree, :func:`closed_form_discrepancies` collects the cases.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import GncsError, PrecisionError, StatisticsError, UnsupportedError
from .specfun import hyp, log_gamma
from .states import FockCoefficients, GncsSpec, build_state, normalization_series

TAIL_LIMIT = 1e-14
SQUEEZE_THRESHOLD = -1e-9
CLOSED_FORM_RTOL = 1e-8


@dataclass(frozen=True)
class ExpectationSet:
    jp: complex
    jm: complex
    jp2: complex
    jm2: complex
    jpjm: float
    j3: float
    n_mean: float
    n2_mean: float

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in ("jp", "jm", "jp2", "jm2", "jpjm", "j3", "n_mean", "n2_mean")}


def _csum(values: np.ndarray) -> complex:
    return complex(math.fsum(values.real.tolist()), math.fsum(values.imag.tolist()))


def expectations_direct(s: FockCoefficients) -> ExpectationSet:
    """All eight moments as compensated sums in ascending n."""
    if s.tail_bound > TAIL_LIMIT:
        raise PrecisionError(f"state truncated too early (tail {s.tail_bound:.2e} > {TAIL_LIMIT})")
    lam = s.spec.lam
    c = s.amplitudes
    n = np.arange(len(c), dtype=float)
    prob = c.real**2 + c.imag**2
    # <n+1|J+|n> for n = 0 .. n_max-1
    up = np.sqrt((n[:-1] + 1) * (n[:-1] + lam + 0.5))
    jp = _csum(np.conj(c[1:]) * c[:-1] * up)
    jp2 = _csum(np.conj(c[2:]) * c[:-2] * up[:-1] * up[1:])
    jpjm = math.fsum((prob * n * (n + lam - 0.5)).tolist())
    n_mean = math.fsum((prob * n).tolist())
    n2_mean = math.fsum((prob * n * n).tolist())
    j3 = math.fsum((prob * (n + lam / 2 + 0.25)).tolist())
    return ExpectationSet(jp, jp.conjugate(), jp2, jp2.conjugate(), jpjm, j3, n_mean, n2_mean)


def _pairs(values) -> list[float]:
    out = []
    for v in values:
        out += [v, v]
    return out


def _log_gamma_ratio(a: float, b: float) -> float:
    return log_gamma(a) - log_gamma(b)


def expectations_closed(spec: GncsSpec, printed: bool = False) -> ExpectationSet:
    """Hypergeometric forms of the moments (r >= 2).

    With ``printed=True`` the reference expressions are evaluated as quoted,
    including their <J3> and <N> prefactors.
    """
    lam, r, t = spec.lam, spec.r, spec.t
    if r < 2:
        raise UnsupportedError("closed forms need r >= 2; use expectations_direct for r = 1")
    if printed and r > 3:
        raise UnsupportedError("the printed parameter lists are only unambiguous for r = 2, 3")
    a = lam + 0.5
    zb = spec.z.conjugate()
    m = normalization_series(spec)
    mid = [lam + k - 0.5 for k in range(2, r)]
    one = math.exp(_log_gamma_ratio(lam + 1.5, lam + r - 0.5))
    two = math.exp(_log_gamma_ratio(lam + 1.5, lam + r - 0.5) + _log_gamma_ratio(lam + 2.5, lam + r + 0.5))

    jp = zb * one * hyp([], [a] + mid + [v + 1 for v in mid], t).real / m
    jp2 = zb**2 * two * hyp([], [a] + mid + [v + 2 for v in mid], t).real / m
    jpjm = t * one**2 * hyp([], [a] + _pairs(v + 1 for v in mid), t).real / m
    j3_pref = lam + 0.5 if printed else lam / 2 + 0.25
    j3 = j3_pref * hyp([lam / 2 + 1.25], [lam / 2 + 0.25, a] + _pairs(mid), t).real / m
    if printed:
        n_pref = t / a * math.exp(2 * _log_gamma_ratio(lam + 2.5, lam + r + 0.5))
    else:
        n_pref = t / a * one**2
    n_mean = n_pref * hyp([], [lam + 1.5] + _pairs(v + 1 for v in mid), t).real / m
    n2_mean = t / a * one**2 * hyp([2.0], [1.0, lam + 1.5] + _pairs(v + 1 for v in mid), t).real / m
    return ExpectationSet(jp, jp.conjugate(), jp2, jp2.conjugate(), jpjm, j3, n_mean, n2_mean)


@dataclass(frozen=True)
class Discrepancy:
    spec: GncsSpec
    quantity: str
    closed: complex
    direct: complex
    rel_error: float

    def line(self) -> str:
        return (f"lambda={self.spec.lam:g} r={self.spec.r} |z|^2={self.spec.t:g} phi={self.spec.z_phase:.6g} "
                f"{self.quantity}: closed={self.closed:.12g} direct={self.direct:.12g} rel={self.rel_error:.3e}")


def _rel(a: complex, b: complex) -> float:
    if a == b:
        return 0.0
    return abs(a - b) / max(abs(b), 1e-300)


def compare_closed(spec: GncsSpec, printed: bool, rtol: float = CLOSED_FORM_RTOL) -> list[Discrepancy]:
    direct = expectations_direct(build_state(spec)).as_dict()
    closed = expectations_closed(spec, printed).as_dict()
    out = []
    for key, dv in direct.items():
        err = _rel(closed[key], dv)
        if err > rtol:
            out.append(Discrepancy(spec, key, complex(closed[key]), complex(dv), err))
    return out


def closed_form_discrepancies(specs, rtol: float = CLOSED_FORM_RTOL) -> list[Discrepancy]:
    """Printed closed forms that disagree with the direct sums (warnings, not failures)."""
    out: list[Discrepancy] = []
    for spec in specs:
        out += compare_closed(spec, printed=True, rtol=rtol)
    return out


@dataclass(frozen=True)
class QuadratureReport:
    var_x1: float
    var_x2: float
    j3_abs: float
    s1: float
    s2: float

    @property
    def squeezed_x1(self) -> bool:
        return self.s1 < SQUEEZE_THRESHOLD

    @property
    def squeezed_x2(self) -> bool:
        return self.s2 < SQUEEZE_THRESHOLD

    @property
    def uncertainty_slack(self) -> float:
        """var_x1 var_x2 - |<J3>|^2 / 4, nonnegative up to roundoff."""
        return self.var_x1 * self.var_x2 - self.j3_abs**2 / 4


def quadratures(e: ExpectationSet) -> QuadratureReport:
    """Variances of X1 = (J+ + J-)/2 and X2 = (J- - J+)/2i and the squeezing factors."""
    j3_abs = abs(e.j3)
    if j3_abs == 0:
        raise StatisticsError("squeezing factor is undefined for <J3> = 0")
    base = 2 * e.jpjm + 2 * e.j3
    re2 = (e.jp2 + e.jm2).real
    x1_mean = (e.jp + e.jm).real / 2
    x2_mean = ((e.jm - e.jp) / 2j).real
    var_x1 = (base + re2) / 4 - x1_mean**2
    var_x2 = (base - re2) / 4 - x2_mean**2
    half = j3_abs / 2
    return QuadratureReport(var_x1, var_x2, j3_abs, (var_x1 - half) / half, (var_x2 - half) / half)


@dataclass(frozen=True)
class StatisticsReport:
    g2: float
    q: float


def statistics(e: ExpectationSet) -> StatisticsReport:
    if not e.n_mean > 0:
        raise StatisticsError("g2 is undefined for <N> = 0")
    g2 = (e.n2_mean - e.n_mean) / e.n_mean**2
    return StatisticsReport(g2, e.n_mean * (g2 - 1))


@dataclass(frozen=True)
class SweepGrid:
    lambdas: tuple[float, ...]
    rs: tuple[int, ...]
    phis: tuple[float, ...] = (0.0,)
    zsq: tuple[float, ...] = ()
    ts: tuple[float, ...] = ()


SWEEP_COLUMNS = {
    "squeeze": ("lambda", "r", "phi", "z_abs2", "var_x1", "var_x2", "j3_abs", "s1", "s2", "error"),
    "stats": ("lambda", "r", "z_abs2", "n_mean", "n2_mean", "g2", "mandel_q", "error"),
    "measure": ("lambda", "r", "t", "weight"),
}


def _squeeze_row(key):
    lam, r, phi, zsq = key
    try:
        e = expectations_direct(build_state(GncsSpec.make(lam, r, math.sqrt(zsq), phi)))
        q = quadratures(e)
        return [lam, r, phi, zsq, q.var_x1, q.var_x2, q.j3_abs, q.s1, q.s2, ""]
    except (GncsError, ValueError, ArithmeticError) as exc:
        return [lam, r, phi, zsq] + [math.nan] * 5 + [f"{type(exc).__name__}: {exc}"]


def _stats_row(key):
    lam, r, zsq = key
    try:
        e = expectations_direct(build_state(GncsSpec.make(lam, r, math.sqrt(zsq))))
        st = statistics(e)
        return [lam, r, zsq, e.n_mean, e.n2_mean, st.g2, st.q, ""]
    except (GncsError, ValueError, ArithmeticError) as exc:
        return [lam, r, zsq] + [math.nan] * 4 + [f"{type(exc).__name__}: {exc}"]


def _measure_rows(key):
    from .algebra import AlgebraParams
    from .measure import curve

    lam, r, ts = key
    vals = curve(AlgebraParams(lam, r), np.array(ts))
    return [[lam, r, t, float(v)] for t, v in zip(ts, vals)]


def sweep_keys(grid: SweepGrid, which: str) -> list[tuple]:
    """Row keys in lexicographic (lambda, r, phi, |z|^2) order."""
    lams, rs = sorted(grid.lambdas), sorted(grid.rs)
    if which == "squeeze":
        return [(lam, r, phi, zsq) for lam in lams for r in rs for phi in sorted(grid.phis) for zsq in sorted(grid.zsq)]
    if which == "stats":
        return [(lam, r, zsq) for lam in lams for r in rs for zsq in sorted(grid.zsq)]
    if which == "measure":
        return [(lam, r, tuple(sorted(grid.ts))) for lam in lams for r in rs] if grid.ts else []
    raise ValueError(f"unknown sweep kind {which!r}")


def sweep(grid: SweepGrid, which: str, workers: int = 1) -> list[list]:
    """Table rows for one sweep; identical for any ``workers``.

    Squeeze and stats rows that fail carry the message in their ``error``
    column instead of stopping the sweep.
    """
    keys = sweep_keys(grid, which)
    fn = {"squeeze": _squeeze_row, "stats": _stats_row, "measure": _measure_rows}[which]
    if workers > 1 and len(keys) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(fn, keys, chunksize=max(1, len(keys) // (4 * workers))))
    else:
        results = [fn(k) for k in keys]
    if which == "measure":
        return [row for block in results for row in block]
    return results
