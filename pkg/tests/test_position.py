import math

import numpy as np
import pytest

from gncs.algebra import AlgebraParams
from gncs.errors import DomainError, UnsupportedError
from gncs.position import (
    WavefunctionSample, compare_closed_form, fock_table, fock_wavefunction, gncs_wavefunction,
    gncs_wavefunction_closed, orthogonality_check, orthonormality_matrix, wavefunction_norm,
)
from gncs.specfun import hyp
from gncs.states import GncsSpec


def test_fock_reference_values():
    p = AlgebraParams(0.75, 1)
    assert fock_wavefunction(p, 0, 1.3) == pytest.approx(0.77684277865785110156, rel=1e-14)
    assert fock_wavefunction(p, 4, 1.3) == pytest.approx(-0.21471795190736543724, rel=1e-13)


def test_ground_state_closed_form():
    p = AlgebraParams(1.5, 1)
    x = np.array([0.2, 1.0, 2.5])
    ref = np.sqrt(2 / math.gamma(2.0)) * x**1.5 * np.exp(-x * x / 2)
    assert np.allclose(fock_wavefunction(p, 0, x), ref, rtol=1e-14)


def test_small_x_sign_alternates():
    p = AlgebraParams(0.25, 1)
    for n in range(6):
        assert np.sign(fock_wavefunction(p, n, 1e-3)) == (-1) ** n


def test_recurrence_table_matches_direct():
    p = AlgebraParams(-0.25, 1)
    x = np.array([0.1, 0.9, 3.0, 6.0])
    table = fock_table(p, 12, x)
    for n in range(13):
        assert np.allclose(table[n], fock_wavefunction(p, n, x), rtol=1e-11, atol=1e-15)


@pytest.mark.parametrize("lam", [-0.25, 0.25, 0.75, 1.5])
def test_orthonormality(lam):
    m = orthonormality_matrix(AlgebraParams(lam, 1), 10)
    assert np.max(np.abs(m - np.eye(11))) < 1e-8


def test_orthogonality_pairs():
    p = AlgebraParams(1.5, 1)
    assert orthogonality_check(p, 3, 7) == pytest.approx(0.0, abs=1e-8)
    assert orthogonality_check(p, 0, 1) == pytest.approx(0.0, abs=1e-8)
    assert orthogonality_check(p, 40, 40) == pytest.approx(1.0, abs=1e-8)
    with pytest.raises(DomainError):
        orthogonality_check(p, 41, 0)


def test_wavefunction_at_vacuum():
    spec = GncsSpec.make(0.75, 3, 0.0)
    x = np.array([0.5, 1.5])
    assert np.allclose(gncs_wavefunction(spec, x), fock_wavefunction(spec.params, 0, x))


def test_wavefunction_norm():
    assert wavefunction_norm(GncsSpec.make(1.5, 3, 1.2, math.pi / 6)) == pytest.approx(1.0, abs=1e-8)
    assert wavefunction_norm(GncsSpec.make(-0.25, 1, 0.9, 1.0)) == pytest.approx(1.0, abs=1e-8)


def test_r2_compact_form_modulus():
    cmp = compare_closed_form(GncsSpec.make(0.75, 2, 0.8, math.pi / 4), [0.3, 1.0, 2.2])
    assert cmp.modulus_error < 1e-9
    # the principal-branch prefactor leaves a constant phase
    assert cmp.ratio_spread < 1e-12


def test_r3_compact_form_at_unit_x():
    spec = GncsSpec.make(1.5, 3, 1.5, 0.0)
    # the 0F1 argument vanishes at x = 1, leaving e^{-1} / sqrt(0F3)
    v = gncs_wavefunction_closed(spec, 1.0)
    assert v == pytest.approx(math.exp(-1) / math.sqrt(hyp([], [2.0, 3.0, 3.0], 2.25).real), rel=1e-14)


def test_r3_compact_form_is_reported_not_trusted():
    cmp = compare_closed_form(GncsSpec.make(1.5, 3, 1.5, 0.0), [0.3, 1.0, 1.7, 2.2])
    # record the finding: the ratio to the series is not constant
    assert cmp.ratio_spread > 0.1


def test_compact_form_errors():
    with pytest.raises(UnsupportedError):
        gncs_wavefunction_closed(GncsSpec.make(0.75, 4, 1.0), 1.0)
    with pytest.raises(DomainError):
        gncs_wavefunction_closed(GncsSpec.make(0.75, 2, 0.0), 1.0)
    with pytest.raises(DomainError):
        gncs_wavefunction(GncsSpec.make(0.75, 2, 1.0), -1.0)
    with pytest.raises(DomainError):
        WavefunctionSample(0.0, 1.0)
