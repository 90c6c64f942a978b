"""Coordinate-chart round trips and volume preservation."""

import numpy as np
from hypothesis import given, settings, strategies as st

from parinf.params import CartesianState, PolarState, McGeheeState
from parinf import charts

finite = st.floats(min_value=-10.0, max_value=10.0,
                   allow_nan=False, allow_infinity=False)
radius = st.floats(min_value=0.5, max_value=100.0)
angle = st.floats(min_value=-np.pi, max_value=np.pi)
momentum = st.floats(min_value=-3.0, max_value=3.0)


@given(r=radius, alpha=angle, y=momentum, G=momentum, s=finite)
@settings(max_examples=200)
def test_polar_cartesian_round_trip(r, alpha, y, G, s):
    p0 = PolarState(r=r, alpha=alpha, y=y, G=G, s=s)
    p1 = charts.cartesian_to_polar(charts.polar_to_cartesian(p0))
    assert abs(p1.r - r) < 1e-12 * max(1.0, r)
    assert abs(np.angle(np.exp(1j * (p1.alpha - alpha)))) < 1e-12
    assert abs(p1.y - y) < 1e-12
    assert abs(p1.G - G) < 1e-12


@given(r=radius, alpha=angle, y=momentum, G=momentum)
@settings(max_examples=200)
def test_polar_mcgehee_round_trip(r, alpha, y, G):
    p0 = PolarState(r=r, alpha=alpha, y=y, G=G)
    m = charts.polar_to_mcgehee(p0)
    assert m.x == np.sqrt(2.0 / r)
    p1 = charts.mcgehee_to_polar(m)
    assert abs(p1.r - r) < 1e-12 * max(1.0, r)


@given(x=st.floats(min_value=0.05, max_value=1.5), alpha=angle,
       y=momentum, G=momentum)
@settings(max_examples=200)
def test_local_chart_round_trip(x, alpha, y, G):
    m0 = McGeheeState(x=x, alpha=alpha, y=y, G=G)
    m1 = charts.local_qp_inverse(charts.local_qp_chart(m0))
    for a, b in zip(m0.astuple(), m1.astuple()):
        assert abs(a - b) < 1e-12


def test_cartesian_mcgehee_round_trip():
    c0 = CartesianState(qx=3.0, qy=-4.0, px=0.2, py=0.1, s=1.0)
    c1 = charts.mcgehee_to_cartesian(charts.cartesian_to_mcgehee(c0))
    # The McGehee chart only resolves positions up to the radial plane;
    # check the polar invariants instead of raw momenta.
    assert np.hypot(c1.qx, c1.qy) == np.hypot(c0.qx, c0.qy)
    g0 = c0.qx * c0.py - c0.qy * c0.px
    g1 = c1.qx * c1.py - c1.qy * c1.px
    assert abs(g1 - g0) < 1e-12


def test_polar_chart_volume_preserved():
    """(r, y) x (alpha, G) is a symplectic chart: Jacobian determinant 1."""
    rng = np.random.default_rng(7)
    for _ in range(25):
        qx, qy = rng.uniform(1.0, 5.0, 2)
        px, py = rng.uniform(-1.0, 1.0, 2)
        h = 1e-6
        base = np.array([qx, qy, px, py])

        def to_polar(v):
            p = charts.cartesian_to_polar(CartesianState(*v, s=0.0))
            return np.array([p.r, p.alpha, p.y, p.G])

        J = np.empty((4, 4))
        for j in range(4):
            d = np.zeros(4)
            d[j] = h
            J[:, j] = (to_polar(base + d) - to_polar(base - d)) / (2 * h)
        assert abs(abs(np.linalg.det(J)) - 1.0) < 1e-6
