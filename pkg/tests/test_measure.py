import math

import numpy as np
import pytest

from gncs.algebra import AlgebraParams
from gncs.errors import RangeError, UnsupportedError
from gncs.measure import (
    anchored_normalization, b_list, curve, moment_target, moments_full_range, prefactor_ratio,
    verify_moments, weight, weight_unchecked,
)
from gncs.specfun import bessel_k


def test_b_list_length():
    assert b_list(AlgebraParams(0.75, 2)) == (0.0, 0.25)
    assert b_list(AlgebraParams(0.75, 4)) == (0.0, 0.25, 1.25, 1.25, 2.25, 2.25)
    with pytest.raises(UnsupportedError):
        b_list(AlgebraParams(0.75, 1))


def test_moment_targets():
    p = AlgebraParams(0.75, 2)
    assert moment_target(p, 0).target == 1.0
    assert moment_target(p, 1).target == pytest.approx(1.25)
    # 3! (1.25)_3^2 / (1.25)_3 = 6 * 1.25 * 2.25 * 3.25
    assert moment_target(p, 3).target == pytest.approx(6 * 1.25 * 2.25 * 3.25)


@pytest.mark.parametrize("lam", [0.75, 1.5])
def test_two_gamma_weight_is_bessel(lam):
    p = AlgebraParams(lam, 2)
    nu = lam - 0.5
    for t in (0.1, 1.0, 5.0, 20.0):
        ref = 2 * t ** (nu / 2) * bessel_k(nu, 2 * math.sqrt(t)) / math.gamma(lam + 0.5)
        assert weight(p, t) == pytest.approx(ref, rel=1e-10)


@pytest.mark.parametrize("r", [2, 3, 4])
@pytest.mark.parametrize("lam", [0.75, 1.5])
def test_moments(r, lam):
    for m in verify_moments(AlgebraParams(lam, r)):
        assert m.rel_error < 1e-10


def test_moments_need_the_tails():
    checks = verify_moments(AlgebraParams(1.5, 4), [3])
    assert checks[0].body_fraction < 1e-6
    assert checks[0].rel_error < 1e-10


def test_full_range_quadrature_independent_of_tails():
    p = AlgebraParams(0.75, 3)
    for n, v in enumerate(moments_full_range(p)):
        assert v == pytest.approx(moment_target(p, n).target, rel=1e-9)


def test_printed_prefactor_is_twice_the_anchored_one():
    for r in (2, 3, 4):
        assert prefactor_ratio(AlgebraParams(1.5, r)) == pytest.approx(2.0, rel=1e-13)


def test_range_enforced():
    p = AlgebraParams(1.5, 3)
    with pytest.raises(RangeError):
        weight(p, 30.0)
    with pytest.raises(RangeError):
        curve(p, [1e-4, 1.0])
    assert weight_unchecked(p, 30.0) > 0


def test_curve_positive_and_decreasing():
    ts = np.linspace(1e-3, 25, 80)
    for r in (2, 3, 4):
        w = curve(AlgebraParams(1.5, r), ts)
        assert np.all(w > 0)
        assert np.all(np.diff(w) < 0)


def test_zeroth_moment_anchor():
    p = AlgebraParams(0.75, 3)
    assert anchored_normalization(p) == pytest.approx(1 / (math.gamma(1.25) * math.gamma(2.25) ** 2))
