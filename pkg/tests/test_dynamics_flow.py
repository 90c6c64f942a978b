"""Vector field structure, integrator quality, and the exact homoclinic."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from parinf.params import Params, McGeheeState
from parinf import dynamics, flow, separatrix
from parinf.dynamics import mcgehee_rhs, kepler_energy, jacobi_integral
from parinf.flow import IntegratorConfig, integrate, poincare_map, iterate_map

angles = st.floats(min_value=-np.pi, max_value=np.pi)


@given(alpha=angles, y=st.floats(min_value=-2, max_value=2),
       G=st.floats(min_value=0.5, max_value=10), s=angles)
@settings(max_examples=100)
def test_field_fixed_on_infinity_circle(alpha, y, G, s):
    """x = y = 0 is a circle of fixed points of the autonomous part."""
    u = np.array([0.0, alpha, 0.0, G, s])
    du = mcgehee_rhs(0.0, u, Params(mu=0.5))
    # only the epoch advances
    assert np.all(du[:4] == 0.0)
    assert du[4] == 1.0


def test_two_body_limit_matches_kepler():
    """mu = 0 orbit reproduces the closed-form Kepler ellipse period."""
    p = Params(mu=0.0)
    G = 2.0
    r = G * G  # circular orbit radius
    st0 = McGeheeState(x=np.sqrt(2.0 / r), alpha=0.0, y=0.0, G=G)
    T = 2.0 * np.pi * r ** 1.5
    traj = integrate(st0, (0.0, T), p, IntegratorConfig(rtol=1e-12, atol=1e-13))
    end = traj.final_state
    assert end.x == pytest.approx(st0.x, abs=1e-9)
    assert np.angle(np.exp(1j * (end.alpha - st0.alpha))) == pytest.approx(0.0, abs=1e-8)


def test_integrator_empirical_order():
    p = Params(mu=0.5)
    u0 = np.array([0.8, 0.2, 0.3, 1.8, 0.0])
    # steps chosen so the endpoint errors span 1e-6 .. 1e-13, well above the
    # rounding floor of the reference solve
    slope = flow.empirical_order(lambda t, u: mcgehee_rhs(t, u, p), u0,
                                 (0.0, 12.0), hs=[2.0, 1.0, 0.5, 0.25])
    assert slope >= 7.7  # DOP853 formal order 8


def test_jacobi_conserved_short():
    p = Params(mu=0.5)
    st0 = McGeheeState(x=0.28, alpha=0.3, y=0.05, G=5.0)
    j0 = jacobi_integral(st0, p)
    traj = integrate(st0, (0.0, 20 * np.pi), p, IntegratorConfig())
    ts = np.linspace(0.0, 20 * np.pi, 80)
    drift = max(abs(jacobi_integral(McGeheeState(*traj(t)), p) - j0) for t in ts)
    assert drift < 1e-10 * abs(j0)


def test_poincare_map_is_period_advance():
    p = Params(mu=0.5)
    st0 = McGeheeState(x=0.28, alpha=0.3, y=0.05, G=5.0, s=0.0)
    one = poincare_map(st0, p)
    assert one.s == pytest.approx(2 * np.pi, abs=1e-12)
    seq = iterate_map(st0, 3, p)
    assert len(seq) == 4
    two = poincare_map(one, p)
    for a, b in zip(seq[2].astuple()[:4], two.astuple()[:4]):
        assert a == pytest.approx(b, abs=1e-10)


# ---------------------------------------------------------------------------
# Exact zero-mass homoclinic family.
# ---------------------------------------------------------------------------

def test_separatrix_residual_small():
    assert separatrix.verify_separatrix((1.0, 2.0, 5.0), tau_span=20.0) < 1e-10


@given(tau=st.floats(min_value=-30.0, max_value=30.0),
       G0=st.floats(min_value=0.8, max_value=8.0))
@settings(max_examples=150)
def test_time_tau_inverse(tau, G0):
    t = separatrix.time_from_tau(tau, G0)
    back = separatrix.tau_from_time(t, G0)
    assert back == pytest.approx(tau, rel=1e-11, abs=1e-11)


@given(tau=st.floats(min_value=-20.0, max_value=20.0),
       G0=st.floats(min_value=1.0, max_value=6.0))
@settings(max_examples=100)
def test_separatrix_is_parabolic(tau, G0):
    """The family lies in the zero-energy level with angular momentum G0."""
    x, alpha, y, G, s = separatrix.separatrix_eval(tau, 0.3, G0)
    st_ = McGeheeState(x=float(x), alpha=float(alpha), y=float(y), G=float(G), s=float(s))
    assert G == G0
    assert kepler_energy(st_) == pytest.approx(0.0, abs=1e-13)


def test_separatrix_perihelion():
    """tau = 0 is the perihelion r = G0^2/2, i.e. x = 2/G0."""
    for G0 in (1.0, 3.0, 5.0):
        x, _, y, _, _ = separatrix.separatrix_eval(0.0, 0.0, G0)
        assert x == pytest.approx(2.0 / G0, rel=1e-14)
        assert y == pytest.approx(0.0, abs=1e-14)
