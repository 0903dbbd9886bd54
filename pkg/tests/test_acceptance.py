"""Acceptance gate: one test, one printed PASS/FAIL line, per criterion.

Every numbered criterion runs at its stated tolerance and budget via
the named checks in monoperim.checks; the asserts here restate the
thresholds explicitly so a regression in either the check or the
underlying numerics turns the line red.  Run with ``pytest -v`` for
one line per criterion, or ``pytest -s`` to see the summary lines.
"""

import math

import pytest

from monoperim.checks import (
    check_classifier,
    check_ibp,
    check_lemma31,
    check_lemma32,
    check_lemma33,
    check_oracle_agreement,
    check_scale_invariance,
    check_thm12,
    check_thmA,
)


def report(number: int, label: str, result, budget_s: float | None = None) -> None:
    status = "PASS" if result.passed else "FAIL"
    budget = "" if budget_s is None else f" / budget {budget_s:g}s"
    print(f"criterion {number} [{label}]: {status} ({result.elapsed_s:.2f}s{budget})", flush=True)


def test_criterion_01_classifier_table_and_equivalence():
    check_classifier(draws=1000)  # warm the code paths before timing
    result = check_classifier(draws=10_000)
    report(1, "classifier", result)
    assert result.measured["table_ok"] is True
    assert result.measured["mismatches"] == 0
    assert result.measured["table_ms"] < 1.0
    assert result.passed


def test_criterion_02_translated_ball_rate():
    result = check_lemma31(count=12, tol=0.05)
    report(2, "escaping-ball rate", result, budget_s=10.0)
    assert abs(result.measured["exponent"] - (-1.0 / 3.0)) <= 0.05
    assert result.elapsed_s < 10.0
    assert result.passed


def test_criterion_03_cone_slab_rate_and_dominant_term():
    result = check_lemma32(count=12, tol=0.05)
    report(3, "collapsing-slab rate", result, budget_s=10.0)
    assert result.measured["tail_decreasing"] is True
    assert result.measured["last_quotient"] < 0.05
    assert abs(result.measured["exponent"] - 0.5) <= 0.05
    assert result.details["dominant_piece"] == "lateral-cone"
    assert result.details["subdominant_ok"] is True
    assert result.elapsed_s < 10.0
    assert result.passed


def test_criterion_04_sharp_ratio_limits():
    result = check_thm12(eps=1e-3, tol=0.01)
    report(4, "sharp perimeter/volume ratio", result, budget_s=30.0)
    cases = result.measured["cases"]
    targets = [case["limit"] for case in result.predicted["cases"]]
    assert targets == [1.0, 2.0]
    for case, target in zip(cases, targets):
        assert abs(case["limit"] - target) <= 0.01 * target
    assert result.elapsed_s < 30.0
    assert result.passed


def test_criterion_05_ball_constants_identity_and_floor():
    result = check_thmA()
    report(5, "ball constants", result)
    assert max(result.measured["identity_gaps"].values()) <= 1e-10
    assert max(result.measured["quadrature_gaps"].values()) <= 1e-6
    assert abs(result.measured["ball_quotient"] - 2.3784) <= 1e-3
    assert result.measured["undercuts"] == []
    assert result.passed


def test_criterion_06_quadrature_vs_monte_carlo():
    result = check_oracle_agreement(sample_count=1_000_000)
    report(6, "oracle agreement", result, budget_s=60.0)
    assert len(result.measured["cases"]) == 20
    assert result.measured["worst_z"] <= 4.0
    assert result.elapsed_s < 60.0
    assert result.passed


def test_criterion_07_mollified_indicator_convergence():
    result = check_lemma33(eps_list=(0.1, 0.05, 0.025), rate_floor=0.9)
    report(7, "mollified indicators", result)
    assert result.details["volume_bounded_by_K_eps"] is True
    assert result.measured["vol_rate"] >= 0.9
    assert result.measured["grad_rate"] >= 0.9
    assert result.passed


def test_criterion_08_one_dimensional_inequality():
    result = check_ibp(count=1000)
    report(8, "piecewise-linear inequality", result)
    assert result.measured["failures"] == 0
    assert result.measured["tent_gap"] <= 1e-8
    assert result.passed


def test_criterion_09_scale_invariance():
    result = check_scale_invariance(lambdas=(0.5, 2.0, 10.0))
    report(9, "scale invariance", result)
    assert result.measured["violations"] == []
    assert math.isfinite(result.measured["worst_rel"])
    assert result.passed
