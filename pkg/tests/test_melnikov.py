"""Homoclinic potential: dual-route means, harmonic asymptotics, symmetry."""

import numpy as np
import pytest

from parinf import melnikov
from parinf.params import Params


def test_mean_series_vs_quadrature():
    """Closed multipole mean against adaptive panel quadrature (dual route)."""
    for mu in (0.2, 0.5):
        p = Params(mu=mu)
        for G0 in (3.0, 5.0, 8.0):
            a = melnikov.reduced_mean_series(G0, p)
            b, err, tail = melnikov.reduced_mean_quadrature(G0, p)
            assert a == pytest.approx(b, rel=1e-10)
            assert err + tail < 1e-10 * abs(b)


def test_mean_leading_order():
    """Mean ~ mu(1-mu) pi / (2 G^3) for large G."""
    p = Params(mu=0.5)
    for G0 in (8.0, 16.0):
        lead = p.mu * (1 - p.mu) * np.pi / (2.0 * G0 ** 3)
        assert melnikov.reduced_mean_series(G0, p) == pytest.approx(lead, rel=0.05)


def test_harmonic_exponential_scaling():
    """First harmonic scales like exp(-G^3/3) between nearby G values.

    Equal masses kill the odd harmonics, so probe an asymmetric mass ratio.
    """
    p = Params(mu=0.3)
    g1, g2 = 2.5, 3.0
    c1 = melnikov.harmonic_mp(1, g1, p, dps=40)
    c2 = melnikov.harmonic_mp(1, g2, p, dps=40)
    observed = float((abs(c2) / abs(c1)))
    predicted = np.exp(-(g2 ** 3 - g1 ** 3) / 3.0)
    # the prefactor varies algebraically; demand the exponential part
    assert 0.1 < observed / predicted < 10.0


def test_harmonic_routes_agree():
    p = Params(mu=0.3)
    for G0 in (2.0, 2.5):
        a = melnikov.harmonic(1, G0, p)
        b = float(melnikov.harmonic_mp(1, G0, p, dps=40))
        assert a == pytest.approx(b, rel=1e-8)


def test_critical_points_shift_invariance():
    """sigma* depends on (alpha0, s0) only through s0 - alpha0."""
    p = Params(mu=0.5)
    base = melnikov.critical_points(0.0, 5.0, 0.0, p)
    shifted = melnikov.critical_points(0.7, 5.0, 0.7, p)
    assert shifted.sigma_minus == pytest.approx(base.sigma_minus, abs=1e-14)
    moved = melnikov.critical_points(0.3, 5.0, 0.0, p)
    assert moved.sigma_minus == pytest.approx(base.sigma_minus - 0.3, abs=1e-14)


def test_critical_points_gap_is_pi():
    p = Params(mu=0.5)
    for G0 in (5.0, 8.0):
        cp = melnikov.critical_points(0.2, G0, 0.1, p)
        assert cp.sigma_plus - cp.sigma_minus == np.pi


def test_poincare_function_periodic_and_even():
    """L is 2pi-periodic in sigma and even around the critical phase."""
    p = Params(mu=0.5)
    G0 = 3.0
    v0 = melnikov.poincare_function(0.0, G0, 0.0, 0.4, p).value
    v1 = melnikov.poincare_function(0.0, G0, 0.0, 0.4 + 2 * np.pi, p).value
    assert v0 == pytest.approx(v1, rel=1e-13)
    vm = melnikov.poincare_function(0.0, G0, 0.0, -0.4, p).value
    assert v0 == pytest.approx(vm, rel=1e-12)


def test_reduced_poincare_branch_ordering():
    """At small G the two branch values differ by the harmonic correction."""
    p = Params(mu=0.5)
    G0 = 2.5
    lm = melnikov.reduced_poincare(G0, p, branch="-")
    lp = melnikov.reduced_poincare(G0, p, branch="+")
    gap = lm - lp
    # gap = 4*(c1 + c3 + ...) with c1 dominant
    c1 = melnikov.harmonic(1, G0, p)
    assert gap == pytest.approx(4.0 * c1, rel=1e-3)


def test_circular_only_guard():
    with pytest.raises(ValueError):
        melnikov.reduced_poincare(5.0, Params(mu=0.5, e0=0.01))
