"""Half-line wavefunctions of the Fock basis and of the coherent states.

    <x|n> = (-1)^n sqrt(2 n! / Gamma(n+lam+1/2)) x^lam e^{-x^2/2} L_n^{lam-1/2}(x^2)

Everything behaves like x^lam at the origin, so integrals over the half-line
are done on the regular part psi / x^lam against the algebraic weight x^{2 lam}.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import roots_jacobi

from .algebra import AlgebraParams
from .errors import ConvergenceError, DomainError, UnsupportedError
from .specfun import hyp, laguerre, log_gamma
from .states import FockCoefficients, GncsSpec, build_state


@dataclass(frozen=True)
class WavefunctionSample:
    x: float
    value: complex

    def __post_init__(self):
        if not self.x > 0:
            raise DomainError(f"wavefunctions live on x > 0, got x = {self.x}")


def _check_x(x) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if np.any(arr <= 0):
        raise DomainError("wavefunctions live on x > 0")
    return arr


def fock_wavefunction(p: AlgebraParams, n: int, x):
    """<x|n, lam> from the Laguerre recurrence."""
    if n < 0:
        raise DomainError(f"Fock index must be nonnegative, got {n}")
    xa = _check_x(x)
    y = xa * xa
    log_norm = 0.5 * (math.log(2.0) + log_gamma(n + 1.0) - log_gamma(n + p.lam + 0.5))
    out = (-1) ** n * math.exp(log_norm) * xa**p.lam * np.exp(-y / 2) * laguerre(n, p.lam - 0.5, y)
    return out if np.ndim(x) else float(out)


def _regular_series(p: AlgebraParams, coeffs: np.ndarray, x: np.ndarray) -> np.ndarray:
    """sum_n coeffs[n] <x|n> / x^lam, vectorised over x.

    Runs the three-term recurrence for the normalised functions
    l_n = sqrt(n!/Gamma(n+a)) L_n^{a-1}(y) with a = lam + 1/2, rescaling
    whenever values grow large so that e^{-y/2} can be applied at the end.
    """
    a = p.lam + 0.5
    y = x * x
    log_scale = -y / 2 + 0.5 * (math.log(2.0) - log_gamma(a))
    prev = np.zeros_like(y)
    cur = np.ones_like(y)
    total = coeffs[0] * cur.astype(complex)
    for n in range(len(coeffs) - 1):
        nxt = ((2 * n + a - y) * cur - math.sqrt(n * (n + a - 1.0)) * prev) / math.sqrt((n + 1) * (n + a))
        prev, cur = cur, nxt
        total = total + coeffs[n + 1] * (-1) ** (n + 1) * cur
        big = np.abs(cur) > 1e150
        if np.any(big):
            s = np.where(big, 1e-150, 1.0)
            prev, cur, total = prev * s, cur * s, total * s
            log_scale = log_scale + np.where(big, 150 * math.log(10.0), 0.0)
    return total * np.exp(log_scale)


def fock_table(p: AlgebraParams, n_max: int, x) -> np.ndarray:
    """Rows <x|0> ... <x|n_max> from the rescaled recurrence."""
    xa = _check_x(np.atleast_1d(x))
    rows = [(_regular_series(p, np.eye(n_max + 1)[n], xa).real) * xa**p.lam for n in range(n_max + 1)]
    return np.array(rows)


def _half_line(values, lam: float, upper: float, rtol: float = 1e-11, order: int = 32, max_splits: int = 8):
    """int_0^upper x^{2 lam} g(x) dx, where ``values(x)`` returns g at an array of nodes.

    The panel touching the origin uses a Gauss-Jacobi rule, which carries the
    x^{2 lam} factor exactly; the others use Gauss-Legendre.  Panels are
    halved until two successive results agree.
    """
    jx, jw = roots_jacobi(order, 0.0, 2 * lam)
    lx, lw = np.polynomial.legendre.leggauss(order)
    panels = max(1, math.ceil(upper))
    prev = None
    for _ in range(max_splits):
        h = upper / panels
        first = 0.5 * h * (jx + 1.0)
        lo = np.arange(1, panels)[:, None] * h
        rest = (lo + 0.5 * h * (lx + 1.0)).ravel()
        x = np.concatenate([first, rest])
        g = np.asarray(values(x))
        w_first = jw * (0.5 * h) ** (2 * lam + 1)
        w_rest = np.tile(lw * 0.5 * h, panels - 1) * rest ** (2 * lam)
        val = np.tensordot(np.concatenate([w_first, w_rest]), g, axes=(0, 0))
        if prev is not None and np.all(np.abs(val - prev) <= rtol * max(1.0, float(np.max(np.abs(val))))):
            return val
        prev = val
        panels *= 2
    raise ConvergenceError("half-line quadrature did not converge")


def _x_cut(lam: float, n: int) -> float:
    # beyond the turning point y = 4n + 2 lam + 2, e^{-y} takes over;
    # 60 more units leave ~1e-26 of the weight
    return math.sqrt(4 * n + 2 * abs(lam) + 62)


def _regular_table(p: AlgebraParams, n_max: int, x: np.ndarray) -> np.ndarray:
    """Rows <x|n> / x^lam for n = 0 .. n_max."""
    return np.array([_regular_series(p, row, x).real for row in np.eye(n_max + 1)])


def orthonormality_matrix(p: AlgebraParams, n_max: int) -> np.ndarray:
    """Matrix of int_0^inf <x|n><x|m> dx for n, m <= n_max."""
    if n_max > 40:
        raise DomainError("orthogonality quadrature is validated for n, m <= 40")

    def values(x):
        rows = _regular_table(p, n_max, x)
        return rows.T[:, :, None] * rows.T[:, None, :]

    return _half_line(values, p.lam, _x_cut(p.lam, n_max))


def orthogonality_check(p: AlgebraParams, n: int, m: int) -> float:
    """int_0^inf <x|n><x|m> dx; should be the Kronecker delta."""
    if max(n, m) > 40:
        raise DomainError("orthogonality quadrature is validated for n, m <= 40")
    top = max(n, m)

    def values(x):
        rows = _regular_table(p, top, x)
        return rows[n] * rows[m]

    return float(_half_line(values, p.lam, _x_cut(p.lam, top)))


def _effective_n(s: FockCoefficients, cutoff: float = 1e-20) -> int:
    """Largest n whose |c_n|^2 is not negligible."""
    w = np.abs(s.amplitudes) ** 2
    idx = np.nonzero(w > cutoff)[0]
    return int(idx[-1]) if len(idx) else 0


def gncs_wavefunction(spec: GncsSpec, x, tolerance: float = 1e-14, state: FockCoefficients | None = None):
    """<x|z> = sum_n c_n <x|n> with the normalised Fock amplitudes."""
    xa = _check_x(np.atleast_1d(x))
    s = state or build_state(spec, tolerance)
    out = _regular_series(spec.params, s.amplitudes, xa) * xa**spec.lam
    return out if np.ndim(x) else complex(out[0])


def wavefunction_norm(spec: GncsSpec, tolerance: float = 1e-14) -> float:
    """int_0^inf |<x|z>|^2 dx by quadrature."""
    s = build_state(spec, tolerance)
    amps = s.amplitudes[: _effective_n(s) + 1]

    def values(x):
        v = _regular_series(spec.params, amps, x)
        return v.real**2 + v.imag**2

    return float(_half_line(values, spec.lam, _x_cut(spec.lam, len(amps) - 1)))


def gncs_wavefunction_closed(spec: GncsSpec, x) -> complex:
    """Compact forms for r = 2 (Bessel J) and r = 3 (0F1 in z(x^2 - 1)).

    For r = 2 the square root of the complex prefactor uses principal branches
    throughout, so only the modulus is branch-independent.  J_nu(w) is
    evaluated as (w/2)^nu / Gamma(nu+1) 0F1(; nu+1; -w^2/4).
    """
    x = float(_check_x(x))
    lam, z = spec.lam, spec.z
    if spec.r == 2:
        if spec.z_abs == 0:
            raise DomainError("the r = 2 compact form is singular at z = 0")
        nu = lam - 0.5
        t = spec.t
        bessel_i = spec.z_abs**nu * hyp([], [nu + 1.0], t).real / math.exp(log_gamma(nu + 1.0))
        w_half = 1j * x * cmath.sqrt(z)
        bessel_j = w_half**nu / math.exp(log_gamma(nu + 1.0)) * hyp([], [nu + 1.0], x * x * z)
        pref = cmath.sqrt((-z / spec.z_abs) ** (0.5 - lam) * 2 * x / bessel_i)
        return pref * cmath.exp(-z - x * x / 2) * bessel_j
    if spec.r == 3:
        norm = hyp([], [lam + 0.5, lam + 1.5, lam + 1.5], spec.t).real
        return x ** (2 * lam) * math.exp(-x * x) * hyp([], [lam + 1.5], z * (x * x - 1)) / math.sqrt(norm)
    raise UnsupportedError("compact wavefunctions exist for r = 2 and r = 3 only")


@dataclass(frozen=True)
class ClosedFormComparison:
    xs: tuple[float, ...]
    closed: tuple[complex, ...]
    series: tuple[complex, ...]

    @property
    def modulus_error(self) -> float:
        return max(abs(abs(c) - abs(s)) for c, s in zip(self.closed, self.series))

    @property
    def ratios(self) -> tuple[complex, ...]:
        return tuple(c / s for c, s in zip(self.closed, self.series))

    @property
    def ratio_spread(self) -> float:
        """Max relative deviation of closed/series from its mean; zero for a constant factor."""
        r = np.array(self.ratios)
        mean = r.mean()
        return float(np.max(np.abs(r - mean)) / abs(mean))


def compare_closed_form(spec: GncsSpec, xs) -> ClosedFormComparison:
    xs = tuple(float(x) for x in xs)
    series = gncs_wavefunction(spec, np.array(xs))
    closed = [gncs_wavefunction_closed(spec, x) for x in xs]
    return ClosedFormComparison(xs, tuple(closed), tuple(complex(v) for v in series))


def wavefunction_samples(spec: GncsSpec, xs) -> list[WavefunctionSample]:
    vals = gncs_wavefunction(spec, np.asarray(xs, dtype=float))
    return [WavefunctionSample(float(x), complex(v)) for x, v in zip(xs, vals)]
