"""Named verification checks reporting measured against predicted values.

Each check exercises one quantitative claim end to end and returns a
CheckResult that the CLI `verify` subcommand prints and exits on.  The
names are the stable identifiers of the claims (lemma31, lemma32,
lemma33, lemma34, thm12, thmA, ibp); a few extra checks back the
remaining acceptance criteria (classifier, oracle agreement, scale
invariance).
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field

import numpy as np

from .corpus import standard_corpus
from .integrate import MCSpec, QuadratureSpec, mc_surface, mc_volume, weighted_surface, weighted_volume
from .isoperimetry import (
    ball_constant,
    classify_existence,
    conditions_equivalent,
    quotient,
    quotient_tolerance,
)
from .limits import (
    SweepSchedule,
    boundary_term_breakdown,
    fit_power_law,
    predicted_exponent,
    sharp_ratio_limit,
    sweep,
)
from .shapes import (
    Box,
    ConeSlab,
    OrthantBall,
    TranslatedBall,
    closed_form_orthant_ball_mass,
    dilate,
    unit_orthant_ball_moment,
)
from .sobolev import (
    MollifierSpec,
    best_constant_p1,
    coarea_chain_report,
    ibp_inequality_check,
    mollified_indicator,
)
from .weight_core import weight_pair

__all__ = [
    "CheckResult",
    "CHECK_NAMES",
    "run_check",
    "check_lemma31",
    "check_lemma32",
    "check_lemma33",
    "check_lemma34",
    "check_thm12",
    "check_thmA",
    "check_ibp",
    "check_classifier",
    "check_oracle_agreement",
    "check_scale_invariance",
]


@dataclass
class CheckResult:
    """Outcome of one named check."""

    name: str
    passed: bool
    measured: dict
    predicted: dict
    details: dict = field(default_factory=dict)
    elapsed_s: float = 0.0

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "measured": self.measured,
            "predicted": self.predicted,
            "details": self.details,
            "elapsed_s": self.elapsed_s,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True)


def _geometric(name: str, lo: float, hi: float, count: int) -> SweepSchedule:
    ratio = (hi / lo) ** (1.0 / (count - 1))
    return SweepSchedule(name, lo, ratio, count)


def check_lemma31(pair=None, i: int = 1, count: int = 12, r: float = 1.0, tol: float = 0.05) -> CheckResult:
    """Escaping-ball decay: fitted exponent matches a_i - sigma b_i."""
    start = time.perf_counter()
    pair = weight_pair((0, 0), (1, 0)) if pair is None else pair
    pair = weight_pair(*pair) if isinstance(pair, tuple) else pair
    schedule = _geometric("t", 10.0, 1e4, count)
    template = TranslatedBall(pair.N, i, schedule.start, r)
    fit = fit_power_law(sweep(template, schedule, pair), schedule)
    target = predicted_exponent(pair, i, TranslatedBall)
    passed = abs(fit.exponent - target) <= tol
    return CheckResult(
        "lemma31",
        passed,
        {"exponent": fit.exponent, "stderr": fit.stderr, "r_squared": fit.r_squared},
        {"exponent": target, "tolerance": tol},
        {"schedule": {"t": list(schedule.values)}},
        time.perf_counter() - start,
    )


def check_lemma32(pair=None, i: int = 1, count: int = 12, R: float = 1.0, tol: float = 0.05) -> CheckResult:
    """Collapsing-slab decay: decreasing tail, exponent a_i - sigma (b_i+1)."""
    start = time.perf_counter()
    pair = weight_pair((2, 0), (0, 0)) if pair is None else pair
    pair = weight_pair(*pair) if isinstance(pair, tuple) else pair
    schedule = _geometric("eps", 1e-1, 1e-4, count)
    template = ConeSlab(pair.N, i, schedule.start, R)
    reports = sweep(template, schedule, pair)
    values = [rep.quotient for rep in reports]
    tail = values[len(values) // 2 :]
    decreasing = all(x > y for x, y in zip(tail, tail[1:]))
    fit = fit_power_law(reports, schedule, tail_fraction=0.5)
    target = predicted_exponent(pair, i, ConeSlab)
    breakdown = boundary_term_breakdown(pair, i, schedule, R)
    passed = decreasing and abs(fit.exponent - target) <= tol
    return CheckResult(
        "lemma32",
        passed,
        {
            "exponent": fit.exponent,
            "stderr": fit.stderr,
            "tail_decreasing": decreasing,
            "last_quotient": values[-1],
        },
        {"exponent": target, "tolerance": tol},
        {
            "dominant_piece": breakdown["dominant_piece"],
            "lower_order_ratio": breakdown["lower_order_ratio"],
            "subdominant_ok": breakdown["subdominant_ok"],
            "piece_exponents": breakdown["piece_exponents"],
        },
        time.perf_counter() - start,
    )


def _orthant_monomial_sup(E, radius: float) -> float:
    """max of x^E over the orthant ball of the given radius."""
    total = sum(E)
    if total == 0.0:
        return 1.0
    return math.prod((radius * math.sqrt(e / total)) ** e for e in E if e > 0)


def check_lemma33(
    eps_list=(0.1, 0.05, 0.025),
    gamma=(1.0, 1.0),
    omega=(1.0, 0.0),
    R: float = 1.0,
    rate_floor: float = 0.9,
) -> CheckResult:
    """Mollified indicators converge at first order in the kernel width.

    Volume side: |int u_eps x^gamma - m_gamma| <= K eps with the
    explicit K = (sup of the weight near the shape) x H^(N-1)(boundary).
    Gradient side: |int |grad u_eps| x^omega - P_omega| -> 0, fitted
    rate at least rate_floor on both sides.
    """
    start = time.perf_counter()
    shape = OrthantBall(2, R)
    m_exact = weighted_volume(shape, gamma).value
    p_exact = weighted_surface(shape, omega).value
    h1 = weighted_surface(shape, (0.0, 0.0)).value
    vol_errors, grad_errors, k_bounds = [], [], []
    for eps in eps_list:
        pad = 2.0 * eps
        u = mollified_indicator(
            shape, MollifierSpec(eps), (-pad, -pad), (R + 3.0 * pad, R + 3.0 * pad), eps / 5.0
        )
        vol_errors.append(abs(u.integrate_weighted(gamma) - m_exact))
        grad_errors.append(abs(u.integrate_weighted(omega, u.gradient_norm()) - p_exact))
        k_bounds.append(_orthant_monomial_sup(gamma, R + eps) * h1)
    log_eps = np.log(eps_list)
    vol_rate = float(np.polyfit(log_eps, np.log(vol_errors), 1)[0])
    grad_rate = float(np.polyfit(log_eps, np.log(grad_errors), 1)[0])
    bounded = all(err <= k * eps for err, k, eps in zip(vol_errors, k_bounds, eps_list))
    passed = vol_rate >= rate_floor and grad_rate >= rate_floor and bounded
    return CheckResult(
        "lemma33",
        passed,
        {
            "vol_errors": vol_errors,
            "grad_errors": grad_errors,
            "vol_rate": vol_rate,
            "grad_rate": grad_rate,
        },
        {"rate_floor": rate_floor, "volume_K": k_bounds[0]},
        {"eps": list(eps_list), "volume_bounded_by_K_eps": bounded},
        time.perf_counter() - start,
    )


def check_lemma34(level_count: int = 16, rel_tol: float = 0.05) -> CheckResult:
    """Coarea lower-bound chain on a mollified orthant-ball indicator."""
    start = time.perf_counter()
    shape = OrthantBall(2, 1.0)
    pair = weight_pair((0, 0), (0, 0))
    u = mollified_indicator(shape, MollifierSpec(0.025), (-0.15, -0.15), (1.2, 1.2), 0.005)
    rep = coarea_chain_report(u, pair, level_count, rel_tol)
    return CheckResult(
        "lemma34",
        rep["holds"],
        {"lhs": rep["lhs"], "rhs": rep["rhs"], "c_hat": rep["c_hat"]},
        {"relation": "lhs >= c_hat * int m^sigma dt", "rel_tol": rel_tol},
        {"levels_used": rep["levels_used"]},
        time.perf_counter() - start,
    )


def check_thm12(pair=None, i: int = 1, eps: float = 1e-3, tol: float = 0.01) -> CheckResult:
    """Extrapolated slab ratio P_A/m_B reaches a_i within tol."""
    start = time.perf_counter()
    if pair is None:
        cases = [
            (weight_pair((1, 0), (0, 0)), 1),
            (weight_pair((2, 1, 0), (1, 1, 0)), 1),
        ]
    else:
        pair = weight_pair(*pair) if isinstance(pair, tuple) else pair
        cases = [(pair, i)]
    measured, predicted = [], []
    passed = True
    for case_pair, case_i in cases:
        res = sharp_ratio_limit(case_pair, case_i, eps)
        measured.append(
            {
                "A": list(case_pair.A),
                "B": list(case_pair.B),
                "limit": res.extrapolated,
                "ratio_at_eps": res.ratio_at_eps,
            }
        )
        predicted.append({"limit": res.constant})
        passed = passed and res.relative_gap <= tol
    return CheckResult(
        "thm12",
        passed,
        {"cases": measured},
        {"cases": predicted, "tolerance": tol, "eps": eps},
        {},
        time.perf_counter() - start,
    )


def check_thmA(
    vectors=((0, 0), (1, 0), (1, 1), (2, 3), (0.5, 1.5, 0)),
    identity_tol: float = 1e-10,
    quad_tol: float = 1e-6,
    floor_value: float = 2.3784,
    floor_tol: float = 1e-3,
) -> CheckResult:
    """Equal-weight ball constants: formula identity, quadrature, floor.

    best_constant_p1 must match ball_constant to identity_tol; the
    quadrature orthant-ball mass must match the Gamma closed form to
    quad_tol relative; and no admissible corpus shape may undercut the
    A = B = (1,1) ball quotient.
    """
    start = time.perf_counter()
    identity_gaps = {}
    quad_gaps = {}
    for A in vectors:
        c1 = best_constant_p1(A)
        bc = ball_constant(A)
        identity_gaps[str(tuple(A))] = abs(c1 - bc) / bc
        quad = unit_orthant_ball_moment(A)
        closed = closed_form_orthant_ball_mass(A)
        quad_gaps[str(tuple(A))] = abs(quad - closed) / closed
    pair = weight_pair((1, 1), (1, 1))
    ball_report = quotient(OrthantBall(2, 1.0), pair)
    floor_ok = abs(ball_report.quotient - floor_value) <= floor_tol
    undercuts = []
    for shape, _ in standard_corpus():
        if shape.dim != 2:
            continue
        lo, _hi = shape.bounding_box()
        if np.any(lo < 0):
            continue
        rep = quotient(shape, pair)
        tol = quotient_tolerance(ball_report, rep)
        if rep.quotient < ball_report.quotient - tol:
            undercuts.append({"shape": rep.shape_params, "quotient": rep.quotient})
    passed = (
        max(identity_gaps.values()) <= identity_tol
        and max(quad_gaps.values()) <= quad_tol
        and floor_ok
        and not undercuts
    )
    return CheckResult(
        "thmA",
        passed,
        {
            "identity_gaps": identity_gaps,
            "quadrature_gaps": quad_gaps,
            "ball_quotient": ball_report.quotient,
            "undercuts": undercuts,
        },
        {
            "identity_tol": identity_tol,
            "quad_tol": quad_tol,
            "ball_quotient": floor_value,
            "floor_tol": floor_tol,
        },
        {},
        time.perf_counter() - start,
    )


def check_ibp(count: int = 1000, seed: int = 2024, tent_tol: float = 1e-8) -> CheckResult:
    """Random piecewise-linear profiles obey the 1-D inequality; tent is sharp."""
    start = time.perf_counter()
    rng = np.random.default_rng(seed)
    failures = 0
    worst_margin = -math.inf
    for _ in range(count):
        n = int(rng.integers(8, 41))
        lo = float(rng.uniform(-3.0, -0.5))
        hi = float(rng.uniform(0.5, 3.0))
        y = np.linspace(lo, hi, n)
        v = rng.uniform(0.0, 1.0, n)
        v[0] = v[-1] = 0.0
        a_i = float(rng.uniform(0.25, 4.0))
        lhs, rhs, holds = ibp_inequality_check(y, v, a_i, a_i - 1.0)
        worst_margin = max(worst_margin, lhs - rhs)
        if not holds:
            failures += 1
    y = np.linspace(-2.0, 2.0, 4001)
    tent = np.clip(1.0 - np.abs(y), 0.0, None)
    lhs, rhs, _ = ibp_inequality_check(y, tent, 1.0, 0.0)
    tent_gap = abs(lhs - rhs)
    passed = failures == 0 and tent_gap <= tent_tol
    return CheckResult(
        "ibp",
        passed,
        {"failures": failures, "worst_margin": worst_margin, "tent_gap": tent_gap},
        {"failures": 0, "tent_tol": tent_tol},
        {"count": count, "seed": seed},
        time.perf_counter() - start,
    )


def check_classifier(draws: int = 10_000, seed: int = 7) -> CheckResult:
    """Four-row verdict table plus randomized condition-form agreement."""
    start = time.perf_counter()
    table = [
        ((1, 0), (0, 0), ("Positive", None, None)),
        ((0, 0), (1, 0), ("Zero", 1, "lower")),
        ((2, 0), (0, 0), ("Zero", 1, "upper")),
        ((1, 1), (0, 0), ("OutsideScope", None, None)),
    ]
    t0 = time.perf_counter()
    table_ok = True
    for A, B, expected in table:
        verdict = classify_existence(weight_pair(A, B))
        got = (verdict.status, verdict.witness_index, verdict.violated_side)
        table_ok = table_ok and got == expected
    table_ms = (time.perf_counter() - t0) * 1e3
    rng = np.random.default_rng(seed)
    mismatches = 0
    for _ in range(draws):
        N = int(rng.integers(2, 5))
        pair = weight_pair(tuple(rng.uniform(0, 4, N)), tuple(rng.uniform(0, 4, N)))
        if not conditions_equivalent(pair):
            mismatches += 1
    passed = table_ok and mismatches == 0
    return CheckResult(
        "classifier",
        passed,
        {"table_ok": table_ok, "table_ms": table_ms, "mismatches": mismatches},
        {"table_ok": True, "mismatches": 0, "table_ms_budget": 1.0},
        {"draws": draws, "seed": seed},
        time.perf_counter() - start,
    )


def check_oracle_agreement(
    sample_count: int = 1_000_000, z_max: float = 4.0, seed: int = 11
) -> CheckResult:
    """Quadrature and Monte Carlo agree on every corpus case."""
    start = time.perf_counter()
    rows = []
    worst_z = 0.0
    passed = True
    for index, (shape, pair) in enumerate(standard_corpus()):
        vol_q = weighted_volume(shape, pair.B)
        vol_mc = mc_volume(shape, pair.B, MCSpec(sample_count, seed + 2 * index))
        per_q = weighted_surface(shape, pair.A)
        per_mc = mc_surface(shape, pair.A, MCSpec(sample_count, seed + 2 * index + 1))
        case = {"shape": shape.describe(), "A": list(pair.A), "B": list(pair.B)}
        for tag, exact, sampled in (("volume", vol_q, vol_mc), ("perimeter", per_q, per_mc)):
            diff = abs(exact.value - sampled.value)
            if sampled.stderr > 0.0:
                z = diff / sampled.stderr
                ok = z <= z_max
                worst_z = max(worst_z, z)
            else:
                z = 0.0
                ok = diff <= 1e-9 * max(1.0, abs(exact.value))
            case[tag] = {"quad": exact.value, "mc": sampled.value, "z": z}
            passed = passed and ok
        rows.append(case)
    return CheckResult(
        "oracle-agreement",
        passed,
        {"worst_z": worst_z, "cases": rows},
        {"z_max": z_max, "sample_count": sample_count},
        {"seed": seed},
        time.perf_counter() - start,
    )


def check_scale_invariance(lambdas=(0.5, 2.0, 10.0)) -> CheckResult:
    """quotient(dilate(s, lam)) = quotient(s) within propagated error."""
    start = time.perf_counter()
    worst = 0.0
    passed = True
    rows = []
    for shape, pair in standard_corpus():
        base = quotient(shape, pair)
        for lam in lambdas:
            scaled = quotient(dilate(shape, lam), pair)
            rel = abs(scaled.quotient - base.quotient) / base.quotient
            tol = max(base.combined_rel_error + scaled.combined_rel_error, 1e-12)
            worst = max(worst, rel)
            if rel > tol:
                passed = False
                rows.append({"shape": shape.describe(), "lambda": lam, "rel": rel, "tol": tol})
    return CheckResult(
        "scale-invariance",
        passed,
        {"worst_rel": worst, "violations": rows},
        {"tolerance": "combined_rel_error per pair, floor 1e-12"},
        {"lambdas": list(lambdas)},
        time.perf_counter() - start,
    )


CHECK_NAMES = {
    "lemma31": check_lemma31,
    "lemma32": check_lemma32,
    "lemma33": check_lemma33,
    "lemma34": check_lemma34,
    "thm12": check_thm12,
    "thmA": check_thmA,
    "ibp": check_ibp,
    "classifier": check_classifier,
    "oracle-agreement": check_oracle_agreement,
    "scale-invariance": check_scale_invariance,
}


def run_check(name: str, **kwargs) -> CheckResult:
    """Run a named check with optional overrides."""
    if name not in CHECK_NAMES:
        raise KeyError(f"unknown check {name!r}; choose from {sorted(CHECK_NAMES)}")
    return CHECK_NAMES[name](**kwargs)
