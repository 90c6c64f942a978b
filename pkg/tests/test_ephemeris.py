"""Primary-orbit ephemeris: Kepler solver and true-anomaly routes agree."""

import numpy as np
from hypothesis import given, settings, strategies as st

from parinf import ephemeris
from parinf.params import Params


@given(M=st.floats(min_value=-20.0, max_value=20.0),
       e0=st.floats(min_value=0.0, max_value=0.9))
@settings(max_examples=200)
def test_kepler_equation_solved(M, e0):
    E = ephemeris.eccentric_anomaly(M, e0)
    assert abs(E - e0 * np.sin(E) - M) < 1e-13 * max(1.0, abs(M))


def test_true_anomaly_routes_agree():
    ts = np.linspace(0.0, 4 * np.pi, 50)
    for e0 in (0.0, 1e-3, 0.05, 0.3):
        va = ephemeris.true_anomaly(ts, e0)
        vb = ephemeris.true_anomaly_ode(ts, e0)
        assert np.max(np.abs(np.unwrap(va) - np.unwrap(vb))) < 1e-9


def test_separation_bounds():
    ts = np.linspace(0.0, 2 * np.pi, 200)
    e0 = 0.2
    rho = ephemeris.primary_separation(ts, e0)
    assert np.all(rho >= 1 - e0 - 1e-12)
    assert np.all(rho <= 1 + e0 + 1e-12)
    # circular degenerate case
    assert np.allclose(ephemeris.primary_separation(ts, 0.0), 1.0)


def test_primary_positions_center_of_mass():
    p = Params(mu=0.3, e0=0.1)
    for t in (0.0, 1.0, 2.5):
        (xs, ys), (xj, yj) = ephemeris.primary_positions(t, p)
        # masses 1-mu at S and mu at J, barycenter at the origin
        assert abs((1 - p.mu) * xs + p.mu * xj) < 1e-13
        assert abs((1 - p.mu) * ys + p.mu * yj) < 1e-13
