"""Transition estimates, homoclinic search edge cases, chain iteration."""

import numpy as np
import pytest

from parinf import shadow
from parinf.params import Params
from parinf.errors import DomainValidationFailure


def test_transition_window_values():
    est = shadow.lambda_transition(1e-6, 1e-2, eps=0.1)
    L = np.log(1e4)
    assert est.S_min == pytest.approx(L / 1.1, rel=1e-12)
    assert est.S_max == pytest.approx(L / 0.9, rel=1e-12)
    assert est.z_drift_bound > 0


def test_transition_window_monotone_in_eps():
    tight = shadow.lambda_transition(1e-6, 1e-2, eps=0.01)
    loose = shadow.lambda_transition(1e-6, 1e-2, eps=0.3)
    assert tight.S_min > loose.S_min
    assert tight.S_max < loose.S_max


def test_transition_rejects_bad_inputs():
    with pytest.raises(DomainValidationFailure):
        shadow.lambda_transition(1e-2, 1e-6)       # delta >= q_exit
    with pytest.raises(DomainValidationFailure):
        shadow.lambda_transition(1e-6, 1e-2, eps=1.5)


def test_model_run_zero_violations():
    rep = shadow.transition_model_run(1e-6, 1e-2, eps=0.1, K=1.0, n_samples=100)
    assert rep["violations"] == 0
    smin, smax = rep["S_observed"]
    assert rep["estimate"].S_min <= smin <= smax <= rep["estimate"].S_max
    assert rep["z_drift_observed"] <= rep["estimate"].z_drift_bound


def test_model_run_deterministic():
    a = shadow.transition_model_run(1e-6, 1e-2, n_samples=50, seed=3)
    b = shadow.transition_model_run(1e-6, 1e-2, n_samples=50, seed=3)
    assert a["S_observed"] == b["S_observed"]
    assert a["z_drift_observed"] == b["z_drift_observed"]


def test_homoclinic_zero_mass_coincides():
    """At mu = 0 the stable and unstable sets coincide with the exact orbit."""
    r = shadow.find_homoclinic(Params(mu=0.0), 5.0, branch="+")
    assert r.coincident
    assert r.residual < 1e-8
    assert r.displacement < 1e-4


def test_chain_circular_fixes_g():
    """Circular interaction map never changes the angular momentum."""
    chain = shadow.build_chain(0.0, 5.0, Params(mu=0.5), n=10, branch="-")
    assert all(link.G == 5.0 for link in chain.links)
    # the phase advances by a fixed shift every link
    d1 = chain.links[1].alpha - chain.links[0].alpha
    d2 = chain.links[2].alpha - chain.links[1].alpha
    assert d1 == pytest.approx(d2, rel=1e-12)
