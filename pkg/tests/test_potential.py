"""Perturbing potential: series vs. direct routes, gradients, decay bound."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from parinf import potential
from parinf.params import Params
from parinf.errors import CollisionError

angles = st.floats(min_value=-np.pi, max_value=np.pi)


def test_kappa_known_values():
    mu = 0.3
    assert potential.kappa_coeff(2, mu) == pytest.approx(mu * (1 - mu), rel=1e-15)
    # l = 3 coefficient: mu(1-mu)(mu^2 - (1-mu)^2) = mu(1-mu)(2mu - 1)
    assert potential.kappa_coeff(3, mu) == pytest.approx(
        mu * (1 - mu) * (2 * mu - 1), rel=1e-14)
    # equal masses kill every odd multipole
    assert potential.kappa_coeff(3, 0.5) == 0.0
    assert potential.kappa_coeff(5, 0.5) == 0.0


@given(x=st.floats(min_value=0.05, max_value=0.6), alpha=angles, s=angles,
       mu=st.floats(min_value=0.05, max_value=0.5))
@settings(max_examples=150)
def test_series_matches_direct_subtraction(x, alpha, s, mu):
    """Multipole route equals U - x^2/2 computed directly (dual route)."""
    p = Params(mu=mu)
    du = potential.delta_U(x, alpha, s, p)
    direct = potential.potential_U(x, alpha, s, p) - 0.5 * x * x
    # the direct route loses ~eps * x^2/2 to cancellation; allow for that
    assert abs(du - direct) < 1e-14 * abs(direct) + 5e-16 * x * x


def test_sixth_power_decay():
    """|dU| <= C mu x^6 near infinity, with C modest for mu = 1/2."""
    p = Params(mu=0.5)
    xs = np.geomspace(1e-3, 0.3, 20)
    vals = np.array([abs(potential.delta_U(x, 0.3, 0.7, p)) for x in xs])
    assert np.all(vals <= 1.0 * p.mu * xs ** 6)


@given(x=st.floats(min_value=0.05, max_value=0.5), alpha=angles, s=angles)
@settings(max_examples=100)
def test_gradients_match_finite_differences(x, alpha, s):
    p = Params(mu=0.4, e0=0.01)
    du, dux, dua = potential.delta_U_gradients(x, alpha, s, p)
    h = 1e-6
    fdx = (potential.delta_U(x + h, alpha, s, p)
           - potential.delta_U(x - h, alpha, s, p)) / (2 * h)
    fda = (potential.delta_U(x, alpha + h, s, p)
           - potential.delta_U(x, alpha - h, s, p)) / (2 * h)
    assert du == pytest.approx(potential.delta_U(x, alpha, s, p), abs=1e-18, rel=1e-12)
    assert dux == pytest.approx(fdx, abs=1e-12, rel=1e-6)
    assert dua == pytest.approx(fda, abs=1e-12, rel=1e-6)


def test_angular_mean_dual_route():
    p = Params(mu=0.35, e0=0.02)
    for x in (0.05, 0.2, 0.4):
        a = potential.delta_U_angular_mean(x, p, s=0.4)
        b = potential.delta_U_angular_mean_elliptic_oracle(x, p, s=0.4)
        assert a == pytest.approx(b, rel=1e-9, abs=1e-16)


def test_collision_floor_raises():
    p = Params(mu=0.5)
    # x = 2 puts the massless body at physical radius 1/2, on top of the
    # primary sitting at distance 1/2 from the barycenter at phase 0
    with pytest.raises(CollisionError):
        potential.potential_U(2.0, 0.0, 0.0, p)


def test_zero_mass_limit_vanishes():
    p = Params(mu=0.0)
    assert potential.delta_U(0.3, 1.0, 2.0, p) == 0.0
