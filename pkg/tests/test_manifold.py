"""Invariant-chart solver: structure, serialization, family symmetry, domain."""

import numpy as np
import pytest
from mpmath import mp

from parinf import manifold
from parinf.params import Params
from parinf.errors import DomainValidationFailure


@pytest.fixture(scope="module")
def chart():
    return manifold.formal_solve(0.0, 10.0, Params(mu=0.5), k=8, stable=True)


def test_internal_dynamics_coefficients(chart):
    """Stable chart contracts at the quartic rate 1/4 along the tangent ray."""
    assert float(chart.rho4) == pytest.approx(-0.25, abs=1e-40)
    with mp.workdps(chart.dps):
        assert abs(chart.c_map - mp.pi / 2) < mp.mpf(10) ** (-chart.dps + 5)
        assert abs(chart.c_flow - mp.mpf(1) / 4) < mp.mpf(10) ** (-chart.dps + 5)


def test_unstable_chart_mirrors_stable():
    ch_u = manifold.formal_solve(0.0, 10.0, Params(mu=0.5), k=4, stable=False)
    assert float(ch_u.rho4) == pytest.approx(0.25, abs=1e-40)


def test_tangent_direction(chart):
    """The chart leaves the fixed circle along x, with y locked to the branch."""
    eps = 1e-9
    z = chart.eval_float(eps)
    assert z.x == pytest.approx(eps, rel=1e-6)           # x ~ t
    assert z.y == pytest.approx(eps, rel=1e-4)           # y ~ +t on the stable side
    assert z.G == pytest.approx(10.0, abs=1e-15)         # G pinned at base


def test_internal_map_inverse(chart):
    for t in (0.01, 0.03):
        fwd = chart.internal_map(t)
        assert chart.internal_map_inverse(fwd) == pytest.approx(t, rel=1e-12)


def test_serialization_round_trip_exact(chart):
    text = manifold.chart_to_text(chart)
    back = manifold.chart_from_text(text)
    assert back.k == chart.k and back.dps == chart.dps
    assert back.stable == chart.stable
    for row_a, row_b in zip(chart.coeffs, back.coeffs):
        for a, b in zip(row_a, row_b):
            assert a == b  # bit exact
    assert back.r4 == chart.r4 and back.r7 == chart.r7
    assert manifold.chart_to_text(back) == text


def test_family_rotation_equivariance(chart):
    """Charts over other base angles come from the base solve by rotation."""
    beta = 0.8
    direct = manifold.formal_solve(beta, 10.0, Params(mu=0.5), k=8, stable=True)
    t = 0.02
    za = direct.eval_float(t)
    zb = chart.eval_family(beta, t)
    assert za.x == pytest.approx(zb.x, rel=1e-9)
    assert np.angle(np.exp(1j * (za.alpha - zb.alpha))) == pytest.approx(0.0, abs=1e-9)
    assert za.y == pytest.approx(zb.y, rel=1e-9)
    assert za.G == pytest.approx(zb.G, rel=1e-12)


def test_defect_small_on_domain(chart):
    """Stroboscopic-map defect at a single parameter value is tiny."""
    d = manifold.invariance_defect(chart, Params(mu=0.5), [0.01], dps=30)
    assert float(d[0]) < 1e-15


def test_rejects_bad_requests():
    with pytest.raises(DomainValidationFailure):
        manifold.formal_solve(0.0, 10.0, Params(mu=0.5, e0=0.01), k=4)
    with pytest.raises(DomainValidationFailure):
        manifold.formal_solve(0.0, 10.0, Params(mu=0.5), k=3)


# ---------------------------------------------------------------------------
# Sector (domain-of-invariance) validation.
# ---------------------------------------------------------------------------

def test_sector_check_accepts_valid_domain():
    dom = manifold.sector_check(4, 0.25, 0.1, 0.3)
    assert dom.ok
    assert dom.b < dom.d  # two-sided contraction sandwich is ordered


def test_sector_check_rejects_fat_sector():
    dom = manifold.sector_check(4, 0.25, 0.1, 2.0)
    assert not dom.ok


# ---------------------------------------------------------------------------
# Straightened local coordinates for the transition estimates.
# ---------------------------------------------------------------------------

def test_straighten_flattens_both_manifolds(chart):
    ch_u = manifold.formal_solve(0.0, 10.0, Params(mu=0.5), k=8, stable=False)
    sc = manifold.straighten_local(chart, ch_u)
    for t in (0.005, 0.01, 0.02):
        z = chart.eval_float(t)
        qt, pt = sc.transform((z.x - z.y) / 2.0, (z.x + z.y) / 2.0)
        # graph truncation at order k leaves an O(t^(k+1)) tail
        assert abs(qt) < 1e-9       # stable set sits on the q = 0 axis
        z = ch_u.eval_float(t)
        qt, pt = sc.transform((z.x - z.y) / 2.0, (z.x + z.y) / 2.0)
        assert abs(pt) < 1e-9       # unstable set sits on the p = 0 axis
    # rescaling rate ~ q + p near the base point
    assert sc.rate(0.01, 0.012) == pytest.approx(0.022, rel=2e-2)


def test_straighten_requires_common_base(chart):
    other = manifold.formal_solve(0.5, 10.0, Params(mu=0.5), k=4, stable=False)
    with pytest.raises(DomainValidationFailure):
        manifold.straighten_local(chart, other)
