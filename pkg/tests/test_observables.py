import math

import numpy as np
import pytest

from gncs.errors import PrecisionError, StatisticsError, UnsupportedError
from gncs.observables import (
    ExpectationSet, SweepGrid, closed_form_discrepancies, compare_closed, expectations_closed,
    expectations_direct, quadratures, statistics, sweep,
)
from gncs.specfun import hyp
from gncs.states import GncsSpec, build_state


def direct(lam, r, zsq, phi=0.0):
    return expectations_direct(build_state(GncsSpec.make(lam, r, math.sqrt(zsq), phi)))


def test_vacuum_moments():
    e = direct(0.75, 3, 0.0)
    assert e.jp == 0 and e.jpjm == 0 and e.n_mean == 0
    assert e.j3 == pytest.approx(0.625)
    q = quadratures(e)
    assert q.var_x1 == pytest.approx(e.j3 / 2) and q.var_x2 == pytest.approx(e.j3 / 2)
    assert q.s1 == pytest.approx(0.0, abs=1e-15) and q.s2 == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(StatisticsError):
        statistics(e)


def test_adjoint_pairs_exact():
    e = direct(0.25, 4, 3.0, 0.9)
    assert e.jm == e.jp.conjugate()
    assert e.jm2 == e.jp2.conjugate()
    assert e.j3 == pytest.approx(e.n_mean + 0.25 / 2 + 0.25, rel=1e-14)
    assert e.n2_mean >= e.n_mean**2 >= 0


def test_lowering_eigenstate_moments():
    # r = 2 states are J- eigenstates, so <J+> = conj z and <J+ J-> = |z|^2
    z = 1.7 * np.exp(0.6j)
    e = direct(0.5, 2, abs(z) ** 2, 0.6)
    assert e.jp == pytest.approx(z.conjugate(), rel=1e-13)
    assert e.jp2 == pytest.approx(z.conjugate() ** 2, rel=1e-13)
    assert e.jpjm == pytest.approx(abs(z) ** 2, rel=1e-13)


def test_number_mean_r2():
    t = 2.0
    expected = t / 1.0 * hyp([], [2.0], t).real / hyp([], [1.0], t).real
    assert direct(0.5, 2, t).n_mean == pytest.approx(expected, rel=1e-13)


def test_truncation_guard():
    s = build_state(GncsSpec.make(0.75, 2, 2.0), tolerance=1e-3, min_n_max=3)
    with pytest.raises(PrecisionError):
        expectations_direct(s)


@pytest.mark.parametrize("r", [2, 3, 4, 5])
@pytest.mark.parametrize("lam", [-0.25, 0.75, 1.5])
def test_rederived_closed_forms(r, lam):
    for zsq in (1.0, 4.0, 16.0):
        for phi in (0.0, math.pi / 3):
            assert compare_closed(GncsSpec.make(lam, r, math.sqrt(zsq), phi), printed=False) == []


def test_printed_forms_logged_not_raised():
    specs = [GncsSpec.make(0.75, r, 2.0, 0.0) for r in (2, 3)]
    found = {(d.quantity, d.spec.r) for d in closed_form_discrepancies(specs)}
    assert found == {("j3", 2), ("j3", 3), ("n_mean", 3)}
    for d in closed_form_discrepancies(specs):
        if d.quantity == "j3":
            assert (d.closed / d.direct).real == pytest.approx(2.0, rel=1e-12)


def test_closed_form_limits():
    with pytest.raises(UnsupportedError):
        expectations_closed(GncsSpec.make(0.75, 1, 0.5))
    with pytest.raises(UnsupportedError):
        expectations_closed(GncsSpec.make(0.75, 4, 0.5), printed=True)
    e = expectations_closed(GncsSpec.make(0.75, 3, 0.0))
    assert e.jp == 0 and e.n_mean == 0
    assert e.j3 == pytest.approx(0.625)


def test_uncertainty_relation():
    for r in (1, 2, 3, 5):
        for phi in (0.0, 0.7, math.pi / 2):
            q = quadratures(direct(-0.25, r, 0.5 if r == 1 else 6.0, phi))
            assert q.uncertainty_slack >= -1e-10
            assert q.s1 >= -1 and q.s2 >= -1


def test_r2_not_squeezed():
    for phi in (0.0, math.pi / 4, math.pi / 2):
        q = quadratures(direct(1.5, 2, 9.0, phi))
        assert not q.squeezed_x1 and not q.squeezed_x2


def test_r4_squeezed_in_x1():
    q = quadratures(direct(0.25, 4, 4.0, 0.0))
    assert q.squeezed_x1 and not q.squeezed_x2


def test_phase_covariance():
    a, b = direct(0.75, 3, 4.0, 0.3), direct(0.75, 3, 4.0, 0.3 + math.pi)
    assert b.jp == pytest.approx(-a.jp, rel=1e-13)
    assert b.jp2 == pytest.approx(a.jp2, rel=1e-13)
    for key in ("jpjm", "j3", "n_mean", "n2_mean"):
        assert getattr(b, key) == pytest.approx(getattr(a, key), rel=1e-13)
    assert statistics(b).g2 == pytest.approx(statistics(a).g2, rel=1e-12)


@pytest.mark.parametrize("lam", [-0.25, 0.25, 1.0])
def test_r1_bunching_constant(lam):
    g = [statistics(direct(lam, 1, t)).g2 for t in (0.1, 0.4, 0.8)]
    assert max(g) - min(g) < 1e-9
    assert g[0] > 1
    # the negative-binomial photon distribution gives 1 + 1/(lam + 1/2)
    assert g[0] == pytest.approx(1 + 1 / (lam + 0.5), rel=1e-12)


def test_mandel_factorization():
    e = direct(0.0, 3, 5.0)
    st = statistics(e)
    assert st.q == pytest.approx(e.n_mean * (st.g2 - 1))
    assert st.q < 0 and st.g2 < 1


def test_sweep_order_and_errors():
    grid = SweepGrid((1.0, -0.25), (1,), (0.5, 0.0), (0.5, 0.25))
    rows = sweep(grid, "squeeze")
    keys = [tuple(r[:4]) for r in rows]
    assert keys == sorted(keys)
    assert all(r[-1] == "" for r in rows)
    bad = sweep(SweepGrid((0.5,), (1,), zsq=(1.2,)), "stats")
    assert bad[0][-1].startswith("DivergenceError")
    assert math.isnan(bad[0][3])


def test_sweep_empty_grid():
    assert sweep(SweepGrid((0.5,), (2,)), "stats") == []
    assert sweep(SweepGrid((0.5,), (2,)), "measure") == []


def test_sweep_parallel_matches_serial():
    grid = SweepGrid((0.0,), (2, 3), zsq=(0.5, 1.0, 2.0, 4.0))
    assert sweep(grid, "stats", workers=1) == sweep(grid, "stats", workers=3)


def test_expectation_set_fields():
    e = ExpectationSet(1j, -1j, 0, 0, 1.0, 0.75, 0.5, 0.5)
    assert set(e.as_dict()) == {"jp", "jm", "jp2", "jm2", "jpjm", "j3", "n_mean", "n2_mean"}
