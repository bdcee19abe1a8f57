"""Generalised nonlinear coherent states |z>_r^lambda in the Fock basis.

Unnormalised amplitudes obey c_0 = 1 and

    c_n / c_{n-1} = z sqrt((n + lam - 1/2) / n) / prod_{k=1}^{r-1} (n + lam + k - 3/2),

so r = 1 is the Perelomov family (unit disk) and r = 2 the Barut-Girardello
family.  The normalisation M is a 1F_{2r-2} series in |z|^2.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .algebra import AlgebraParams, build_truncated
from .errors import ConvergenceError, DivergenceError, DomainError
from .specfun import hyp, log_gamma

DEFAULT_TOLERANCE = 1e-14
MIN_N_MAX = 30
MAX_N_MAX = 200_000
R1_RADIUS_MARGIN = 1e-9


@dataclass(frozen=True)
class GncsSpec:
    params: AlgebraParams
    z_abs: float
    z_phase: float = 0.0

    def __post_init__(self):
        if not self.z_abs >= 0:
            raise DomainError(f"|z| must be nonnegative, got {self.z_abs}")
        if self.params.r == 1 and self.z_abs >= 1 - R1_RADIUS_MARGIN:
            raise DivergenceError(f"r = 1 states need |z| < 1, got |z| = {self.z_abs}")
        object.__setattr__(self, "z_abs", float(self.z_abs))
        object.__setattr__(self, "z_phase", float(self.z_phase))

    @classmethod
    def make(cls, lam: float, r: int, z_abs: float, z_phase: float = 0.0) -> "GncsSpec":
        return cls(AlgebraParams(lam, r), z_abs, z_phase)

    @property
    def lam(self) -> float:
        return self.params.lam

    @property
    def r(self) -> int:
        return self.params.r

    @property
    def z(self) -> complex:
        return cmath.rect(self.z_abs, self.z_phase)

    @property
    def t(self) -> float:
        """|z|^2."""
        return self.z_abs**2


@dataclass(frozen=True)
class FockCoefficients:
    spec: GncsSpec
    amplitudes: np.ndarray
    norm_m: float  # accumulated normalisation sum M
    tail_bound: float  # estimated relative weight beyond n_max
    turning_index: int  # argmax |c_n|
    normalized: bool = True
    time: float = 0.0
    extra: dict = field(default_factory=dict, compare=False)

    @property
    def n_max(self) -> int:
        return len(self.amplitudes) - 1

    @property
    def norm_check(self) -> float:
        a = self.amplitudes
        return math.fsum((a.real**2 + a.imag**2).tolist())

    def to_json(self) -> dict:
        return {
            "lambda": self.spec.lam,
            "r": self.spec.r,
            "z_abs": self.spec.z_abs,
            "z_phase": self.spec.z_phase,
            "time": self.time,
            "n_max": self.n_max,
            "tail_bound": self.tail_bound,
            "norm_M": self.norm_m,
            "norm_check": self.norm_check,
            "amplitudes": [[float(c.real), float(c.imag)] for c in self.amplitudes],
        }

    @classmethod
    def from_json(cls, data: dict) -> "FockCoefficients":
        spec = GncsSpec.make(data["lambda"], data["r"], data["z_abs"], data["z_phase"])
        amps = np.array([complex(re, im) for re, im in data["amplitudes"]])
        return cls(spec, amps, data["norm_M"], data["tail_bound"],
                   int(np.argmax(np.abs(amps))), time=data.get("time", 0.0))


def log_coefficient_ratio(p: AlgebraParams, n: int) -> float:
    """ln |c_n / c_{n-1}| / |z| (the z-independent part)."""
    out = 0.5 * (math.log(n + p.lam - 0.5) - math.log(n)) if n + p.lam - 0.5 > 0 else -math.inf
    for k in range(1, p.r):
        out -= math.log(n + p.lam + k - 1.5)
    return out


def coefficient_ratio(spec: GncsSpec, n: int) -> complex:
    if n < 1:
        raise DomainError("coefficient ratio is defined for n >= 1")
    return spec.z * math.exp(log_coefficient_ratio(spec.params, n))


def build_state(spec: GncsSpec, tolerance: float = DEFAULT_TOLERANCE, min_n_max: int = MIN_N_MAX) -> FockCoefficients:
    """Normalised amplitudes of |z>_r^lambda.

    Terms are accumulated until the geometric tail estimate of sum |c_n|^2,
    weighted by n^2 so that second moments are covered too, falls below
    ``tolerance`` times the running norm (and n >= ``min_n_max``).
    ``tail_bound`` records the unweighted relative tail.
    """
    p = spec.params
    log_abs_z = math.log(spec.z_abs) if spec.z_abs > 0 else -math.inf
    log_mag = [0.0]
    # running norm in units of the largest |c_n|^2 seen so far
    log_peak = 0.0
    norm = 1.0
    tail = 0.0
    n = 0
    while True:
        n += 1
        if spec.z_abs == 0:
            log_mag.append(-math.inf)
        else:
            log_mag.append(log_mag[-1] + log_abs_z + log_coefficient_ratio(p, n))
        lm2 = 2 * log_mag[-1]
        if lm2 > log_peak:
            norm = norm * math.exp(log_peak - lm2) + 1.0
            log_peak = lm2
        else:
            norm += math.exp(lm2 - log_peak)
        if n >= min_n_max:
            if spec.z_abs == 0:
                tail = 0.0
                break
            next_ratio = math.exp(2 * (log_abs_z + log_coefficient_ratio(p, n + 1)))
            rho = max(next_ratio, spec.t if p.r == 1 else 0.0)
            if rho < 1.0:
                tail = math.exp(lm2 - log_peak) * rho / (1.0 - rho) / norm
                # second moments see the tail weighted by roughly n^2
                reach = n + 1.0 / (1.0 - rho)
                if tail * reach * reach < tolerance:
                    break
        if n >= MAX_N_MAX:
            raise ConvergenceError(f"state did not converge within {MAX_N_MAX} Fock states")
    log_mag_arr = np.array(log_mag)
    sq = np.exp(2 * log_mag_arr - log_peak)
    norm = math.fsum(sq.tolist())
    log_m = log_peak + math.log(norm)
    idx = np.arange(len(log_mag_arr))
    amps = np.exp(log_mag_arr - 0.5 * log_m) * np.exp(1j * idx * spec.z_phase)
    amps[0] = math.exp(-0.5 * log_m)
    return FockCoefficients(
        spec=spec,
        amplitudes=amps,
        norm_m=math.exp(log_m),
        tail_bound=tail,
        turning_index=int(np.argmax(log_mag_arr)),
    )


def normalization_parameters(p: AlgebraParams) -> tuple[list[float], list[float]]:
    """Parameter lists of M = 1F_{2r-2}([lam+1/2]; [lam+1/2, lam+1/2, ..., lam+r-3/2, lam+r-3/2]; |z|^2)."""
    a = p.lam + 0.5
    den: list[float] = []
    for k in range(1, p.r):
        den += [p.lam + k - 0.5] * 2
    return [a], den


def normalization_series(spec: GncsSpec, tolerance: float = 1e-15) -> float:
    num, den = normalization_parameters(spec.params)
    return hyp(num, den, spec.t, tolerance).real


def overlap(a: FockCoefficients, b: FockCoefficients) -> complex:
    """<a|b> = sum conj(a_n) b_n over the common support."""
    if a.spec.lam != b.spec.lam:
        raise DomainError("states with different lambda live in different Hilbert spaces")
    n = min(len(a.amplitudes), len(b.amplitudes))
    prod = np.conj(a.amplitudes[:n]) * b.amplitudes[:n]
    return complex(math.fsum(prod.real.tolist()), math.fsum(prod.imag.tolist()))


def overlap_closed(s1: GncsSpec, s2: GncsSpec) -> complex:
    """Hypergeometric form of <z1|z2> for equal deformation r."""
    if s1.lam != s2.lam:
        raise DomainError("states with different lambda live in different Hilbert spaces")
    if s1.r != s2.r:
        raise DomainError("use overlap_closed_mixed for different deformations")
    num, den = normalization_parameters(s1.params)
    x = s1.z.conjugate() * s2.z
    return hyp(num, den, x) / math.sqrt(normalization_series(s1) * normalization_series(s2))


def overlap_closed_mixed(lam: float, r1: int, r2: int, z_abs: float) -> float:
    """<z|_{r1} |z>_{r2} at a common z: 1F_{r1+r2-2}([lam+1/2]; [lam+1/2..lam+r1-3/2, lam+1/2..lam+r2-3/2]; |z|^2)."""
    den = [lam + k - 0.5 for k in range(1, r1)] + [lam + k - 0.5 for k in range(1, r2)]
    t = z_abs**2
    m1 = normalization_series(GncsSpec.make(lam, r1, z_abs))
    m2 = normalization_series(GncsSpec.make(lam, r2, z_abs))
    return hyp([lam + 0.5], den, t).real / math.sqrt(m1 * m2)


def evolve(s: FockCoefficients, t: float) -> FockCoefficients:
    """Apply exp(-i t H) with H |n> = (2n + lam + 1/2) |n>."""
    n = np.arange(len(s.amplitudes))
    phases = np.exp(-1j * t * (2 * n + s.spec.lam + 0.5))
    return replace(s, amplitudes=s.amplitudes * phases, time=s.time + t)


def nonlinearity_function(p: AlgebraParams, n):
    """f(n) = Gamma(n + lam + r - 1/2) / Gamma(n + lam + 3/2)."""
    n_arr = np.atleast_1d(np.asarray(n, dtype=float))
    out = np.array([math.exp(log_gamma(k + p.lam + p.r - 0.5) - log_gamma(k + p.lam + 1.5)) for k in n_arr])
    return out if np.ndim(n) else float(out[0])


def verify_eigenstate(s: FockCoefficients, spec: GncsSpec | None = None) -> float:
    """|| f(N) J- |z> - z |z> || over the indices n < n_max."""
    spec = spec or s.spec
    alg = build_truncated(spec.params, max(s.n_max, 2))
    amps = s.amplitudes
    if len(amps) < alg.n_max + 1:
        amps = np.concatenate([amps, np.zeros(alg.n_max + 1 - len(amps), dtype=complex)])
    lowered = alg.jm.apply(amps.astype(np.clongdouble))
    f = nonlinearity_function(spec.params, np.arange(alg.n_max + 1))
    resid = (f * lowered - spec.z * amps)[: alg.n_max]
    return float(np.sqrt(np.sum(np.abs(resid) ** 2)))


def barut_girardello_amplitudes(lam: float, z: complex, n_max: int) -> np.ndarray:
    """Normalised r = 2 amplitudes z^n sqrt(Gamma(lam+1/2) / (n! Gamma(n+lam+1/2))) / sqrt(M)."""
    n = np.arange(n_max + 1)
    logs = np.array([0.5 * (log_gamma(lam + 0.5) - log_gamma(k + 1) - log_gamma(k + lam + 0.5)) for k in n])
    raw = np.exp(logs + n * math.log(abs(z))) * np.exp(1j * n * cmath.phase(z)) if z != 0 else (n == 0).astype(complex)
    return raw / math.sqrt(math.fsum(np.abs(raw) ** 2))


def perelomov_amplitudes(lam: float, xi: complex, n_max: int) -> np.ndarray:
    """Normalised r = 1 amplitudes xi^n sqrt((lam+1/2)_n / n!) / sqrt(M), product form."""
    out = np.empty(n_max + 1, dtype=complex)
    out[0] = 1.0
    for n in range(1, n_max + 1):
        out[n] = out[n - 1] * xi * math.sqrt((lam + 0.5 + n - 1) / n)
    return out / math.sqrt(math.fsum(np.abs(out) ** 2))
