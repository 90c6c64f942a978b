"""Scattering maps: twist law, branch collapse, elliptic secular structure."""

import numpy as np
import pytest

from parinf import scattering
from parinf.params import Params


def test_phase_shift_matches_asymptotic():
    p = Params(mu=0.5)
    fn = scattering.f_branch(8.0, p, branch="-", route="series")
    fa = scattering.f_asymptotic(8.0, p)
    assert fn / fa == pytest.approx(1.0, abs=1e-3)


def test_branches_collapse_at_moderate_g():
    """f+ and f- differ by an exponentially small harmonic term."""
    p = Params(mu=0.5)
    fm = scattering.f_branch(4.0, p, branch="-", route="series")
    fp = scattering.f_branch(4.0, p, branch="+", route="series")
    assert abs(fp - fm) < 1e-6 * abs(fm)


def test_twist_statistic_bounded_away_from_zero():
    p = Params(mu=0.5)
    stat, limit = scattering.twist_check((8.0, 16.0, 32.0), p)
    assert stat > 0.5 * limit
    s32 = scattering.twist_statistic(32.0, p)
    assert s32 == pytest.approx(limit, rel=1e-2)


def test_circular_map_preserves_g():
    p = Params(mu=0.5)
    a1, g1 = scattering.scattering_circular(0.3, 8.0, p)
    assert g1 == 8.0
    assert a1 != 0.3


def test_elliptic_reduces_to_circular():
    """e0 = 0 elliptic machinery reproduces the circular phase shift."""
    em = scattering.EllipticScattering(Params(mu=0.5, e0=0.0))
    a0, g0 = 0.3, 8.0
    a1, g1 = em.map(a0, g0, branch="-")
    a1c, g1c = scattering.scattering_circular(a0, g0, Params(mu=0.5), branch="-")
    assert g1 == pytest.approx(g0, abs=1e-14)
    assert a1 == pytest.approx(a1c, rel=1e-6)


def test_elliptic_map_symplectic():
    """Interaction map has Jacobian determinant 1 to finite-difference error."""
    em = scattering.EllipticScattering(Params(mu=0.5, e0=1e-3))
    J = em.jacobian(0.4, 6.0, branch="-")
    assert abs(np.linalg.det(np.asarray(J, dtype=float)) - 1.0) < 1e-6


def test_elliptic_kick_scales_with_e0():
    """The G-kick is first order in the primary eccentricity.

    Equal masses cancel the linear-in-e0 kick by symmetry, so use mu = 0.3.
    """
    a0, g0 = 0.9, 4.0
    kicks = []
    for e0 in (5e-4, 1e-3):
        em = scattering.EllipticScattering(Params(mu=0.3, e0=e0))
        _, g1 = em.map(a0, g0, branch="-")
        kicks.append(g1 - g0)
    assert kicks[1] / kicks[0] == pytest.approx(2.0, rel=0.05)


def test_asymptotic_guard():
    with pytest.raises(ValueError):
        scattering.f_asymptotic(2.0, Params(mu=0.5))
