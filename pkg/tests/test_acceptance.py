"""Acceptance suite: one test per end-to-end criterion.

Each test prints a single PASS/FAIL line with the measured quantity and its
target, then asserts the verdict.  The oscillation demonstration (criterion
10) runs for tens of minutes and carries the ``slow`` marker.
"""

import pytest

from parinf import acceptance as acc


def _check(fn):
    res = fn()
    print("\n" + res.line())
    assert res.ok, res.detail


def test_criterion_01_separatrix_residual():
    _check(acc.criterion_1_separatrix_residual)


def test_criterion_02_jacobi_conservation():
    _check(acc.criterion_2_jacobi_conservation)


def test_criterion_03_melnikov_critical_points():
    _check(acc.criterion_3_melnikov_critical_points)


def test_criterion_04_twist_asymptotics():
    _check(acc.criterion_4_twist_asymptotics)


def test_criterion_05_reduced_leading_term():
    _check(acc.criterion_5_reduced_leading_term)


def test_criterion_06_chart_defect_order():
    _check(acc.criterion_6_chart_defect_order)


def test_criterion_07_normal_form():
    _check(acc.criterion_7_normal_form)


def test_criterion_08_transition_bounds():
    _check(acc.criterion_8_transition_bounds)


def test_criterion_09_homoclinic_branches():
    _check(acc.criterion_9_homoclinic_branches)


@pytest.mark.slow
def test_criterion_10_oscillation_demo():
    _check(acc.criterion_10_oscillation_demo)


def test_criterion_11_bounded_chain():
    _check(acc.criterion_11_bounded_chain)
