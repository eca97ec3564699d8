"""Acceptance gate: one test per criterion, each printing a pass/fail line.

These are the exit criteria of the build, pinned at fixed tolerances and
seeds; run ``pytest tests/test_acceptance.py -s`` to see the summary lines.
The statistical checks use the replication counts noted in each criterion;
the two deliberate scale adaptations (subcritical CFTP leg, torus critical
replication count) are documented in the verify module and the project
notes.
"""

import pytest

from homwalk import verify


def _run(check, *args, **kwargs):
    result = check(*args, **kwargs)
    print()
    print(result.report_line())
    assert result.passed, result.details
    return result


def test_criterion_01_counting_exactness():
    _run(verify.check_counting)


def test_criterion_02_bijection_round_trips():
    _run(verify.check_bijections)


def test_criterion_03_structure_count_formulas():
    _run(verify.check_structure_counts)


@pytest.mark.slow
def test_criterion_04_exact_samplers_uniform():
    _run(verify.check_exact_samplers)


def test_criterion_05_supercritical_localization():
    _run(verify.check_supercritical)


@pytest.mark.slow
def test_criterion_06_subcritical_variance():
    _run(verify.check_subcritical)


@pytest.mark.slow
def test_criterion_07_critical_line_range_law():
    _run(verify.check_critical_line)


@pytest.mark.slow
def test_criterion_07_critical_torus_range_law():
    _run(verify.check_critical_torus)


def test_criterion_08_local_limit_convergence():
    _run(verify.check_local_limit)


def test_criterion_09_growth_base():
    _run(verify.check_lambda)


def test_criterion_10_reference_distributions():
    _run(verify.check_refdist)


def test_criterion_11_torus_range_identity():
    _run(verify.check_range_identity)


def test_criterion_12_property_suites():
    _run(verify.check_properties)
