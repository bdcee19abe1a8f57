import cmath
import math

import numpy as np
import pytest

from gncs.algebra import AlgebraParams
from gncs.errors import DivergenceError, DomainError
from gncs.specfun import log_gamma
from gncs.states import (
    FockCoefficients, GncsSpec, barut_girardello_amplitudes, build_state, coefficient_ratio, evolve,
    nonlinearity_function, normalization_series, overlap, overlap_closed, overlap_closed_mixed,
    perelomov_amplitudes, verify_eigenstate,
)


def brute_amplitudes(lam, r, z, n_max):
    """Unnormalised c_n straight from the gamma-function product."""
    out = []
    for n in range(n_max + 1):
        log_c = 0.5 * (log_gamma(n + lam + 0.5) - log_gamma(lam + 0.5) - log_gamma(n + 1))
        for k in range(1, r):
            log_c += log_gamma(lam + k - 0.5) - log_gamma(n + lam + k - 0.5)
        out.append(math.exp(log_c) * z**n)
    return np.array(out)


def test_spec_validation():
    with pytest.raises(DivergenceError):
        GncsSpec.make(0.5, 1, 1.0)
    with pytest.raises(DomainError):
        GncsSpec.make(0.5, 2, -1.0)
    GncsSpec.make(0.5, 2, 30.0)


def test_vacuum():
    s = build_state(GncsSpec.make(0.75, 3, 0.0))
    assert s.amplitudes[0] == 1.0
    assert np.all(s.amplitudes[1:] == 0)
    assert s.norm_m == 1.0


@pytest.mark.parametrize("lam, r, z", [(0.75, 3, 1.3 * cmath.exp(0.4j)), (-0.25, 2, 2.0), (1.5, 5, 3.5j), (0.25, 1, 0.6)])
def test_matches_gamma_product(lam, r, z):
    s = build_state(GncsSpec.make(lam, r, abs(z), cmath.phase(z)))
    raw = brute_amplitudes(lam, r, z, s.n_max)
    assert np.allclose(s.amplitudes, raw / math.sqrt(s.norm_m), rtol=1e-12, atol=1e-300)
    assert s.norm_check == pytest.approx(1.0, abs=1e-13)


def test_ratio():
    spec = GncsSpec.make(0.75, 3, 1.2, 0.3)
    c = brute_amplitudes(0.75, 3, spec.z, 5)
    assert coefficient_ratio(spec, 4) == pytest.approx(c[4] / c[3], rel=1e-13)


def test_barut_girardello_normalization():
    # r = 2, lam = 1/2: M = I_0(2|z|)
    s = build_state(GncsSpec.make(0.5, 2, 2.0))
    assert s.norm_m == pytest.approx(11.301921952136330496, rel=1e-13)
    assert np.allclose(s.amplitudes, barut_girardello_amplitudes(0.5, 2.0, s.n_max), atol=1e-15)


def test_perelomov_normalization():
    s = build_state(GncsSpec.make(0.75, 1, 0.9))
    assert s.norm_m == pytest.approx((1 - 0.81) ** -1.25, rel=1e-12)
    assert np.allclose(s.amplitudes, perelomov_amplitudes(0.75, 0.9, s.n_max), atol=1e-14)


@pytest.mark.parametrize("r", [2, 3, 4, 5])
def test_norm_series(r):
    spec = GncsSpec.make(0.25, r, 2.0, 1.0)
    assert build_state(spec).norm_m == pytest.approx(normalization_series(spec), rel=1e-12)


def test_overlap_closed_equal_r():
    a = GncsSpec.make(0.75, 3, 1.1, 0.2)
    b = GncsSpec.make(0.75, 3, 0.7, -1.0)
    direct = overlap(build_state(a), build_state(b))
    assert abs(direct - overlap_closed(a, b)) < 1e-13
    assert overlap(build_state(a), build_state(a)) == pytest.approx(1.0, abs=1e-14)


def test_overlap_mixed_deformation():
    direct = overlap(build_state(GncsSpec.make(0.75, 2, 1.2)), build_state(GncsSpec.make(0.75, 4, 1.2)))
    assert direct.real == pytest.approx(overlap_closed_mixed(0.75, 2, 4, 1.2), rel=1e-13)


def test_overlap_rejects_lambda_mismatch():
    with pytest.raises(DomainError):
        overlap(build_state(GncsSpec.make(0.75, 2, 1.0)), build_state(GncsSpec.make(0.25, 2, 1.0)))


def test_eigenstate_residual():
    for r in (1, 2, 3, 5):
        s = build_state(GncsSpec.make(0.25, r, 0.8 if r == 1 else 3.0, 0.7))
        assert verify_eigenstate(s) < 1e-12


def test_nonlinearity_function():
    p = AlgebraParams(0.75, 2)
    assert np.allclose(nonlinearity_function(p, np.arange(5)), 1.0)
    p3 = AlgebraParams(0.75, 3)
    assert nonlinearity_function(p3, 2) == pytest.approx(2 + 0.75 + 1.5)


def test_evolution_rotates_label():
    spec = GncsSpec.make(0.25, 4, 2.0, 0.5)
    t = 0.8
    moved = evolve(build_state(spec), t)
    rebuilt = build_state(GncsSpec.make(0.25, 4, 2.0, 0.5 - 2 * t))
    phase = cmath.exp(-1j * t * 0.75)
    assert np.allclose(moved.amplitudes, phase * rebuilt.amplitudes, atol=1e-14)
    assert moved.time == t


def test_phase_flip_alternates_signs():
    a = build_state(GncsSpec.make(0.75, 3, 1.5, 0.0))
    b = build_state(GncsSpec.make(0.75, 3, 1.5, math.pi))
    signs = (-1.0) ** np.arange(a.n_max + 1)
    assert np.allclose(b.amplitudes, signs * a.amplitudes, atol=1e-15)


def test_json_round_trip():
    s = build_state(GncsSpec.make(1.5, 3, 1.2, 0.4))
    back = FockCoefficients.from_json(s.to_json())
    assert np.array_equal(back.amplitudes, s.amplitudes)
    assert back.spec == s.spec
