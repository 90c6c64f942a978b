"""Extended-precision flow: agreement with the double-precision integrator."""

import numpy as np
import pytest
from mpmath import mp

from parinf import jetflow
from parinf.params import Params, McGeheeState
from parinf.flow import IntegratorConfig, integrate
from parinf.potential import kappa_coeff


def test_kappa_mp_matches_float():
    for l in range(2, 10):
        for mu in (0.2, 0.5):
            assert float(jetflow.kappa_mp(l, mu)) == pytest.approx(
                kappa_coeff(l, mu), rel=1e-13, abs=1e-30)


def test_flow_mp_matches_double_precision():
    p = Params(mu=0.5)
    st0 = McGeheeState(x=0.28, alpha=0.3, y=0.05, G=5.0, s=0.0)
    traj = integrate(st0, (0.0, 2 * np.pi), p, IntegratorConfig(rtol=1e-13, atol=1e-14))
    ref = traj.final_state
    with mp.workdps(30):
        out = jetflow.flow_mp(st0.astuple(), p, (0, 2 * mp.pi))
    for a, b in zip(ref.astuple()[:4], out[:4]):
        assert a == pytest.approx(float(b), abs=2e-12)


def test_poincare_map_mp_preserves_jacobi():
    """H - G is conserved to working precision by the extended-precision map."""
    p = Params(mu=0.5)
    with mp.workdps(30):
        z0 = (mp.mpf("0.28"), mp.mpf("0.3"), mp.mpf("0.05"), mp.mpf(5))
        z1 = jetflow.poincare_map_mp(z0, p)

        def jac(z, s):
            x, alpha, y, G = z
            from parinf.potential import delta_U
            du = float(delta_U(float(x), float(alpha), float(s), p))
            h = (y * y + G * G * x ** 4 / 4) / 2 - x * x / 2 - mp.mpf(du)
            return h - G

        # the perturbing-potential term is re-evaluated in double precision,
        # which limits the visible drift to ~|dU| * 1e-16 ~ 1e-21
        drift = abs(jac(z1, 2 * mp.pi) - jac(z0, 0))
        assert drift < mp.mpf(10) ** (-19)


def test_elliptic_not_supported():
    with pytest.raises(NotImplementedError):
        jetflow.flow_mp((0.1, 0.0, 0.0, 5.0, 0.0), Params(mu=0.5, e0=0.01), (0, 1))
