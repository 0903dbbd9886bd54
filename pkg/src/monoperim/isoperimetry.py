"""Weighted isoperimetric quotients and existence classification.

The quotient of a shape is P_A / m_B^sigma with sigma = (N+a-1)/(N+b),
the unique exponent making the value dilation invariant.  Whether the
infimum of the quotient over admissible sets is positive is decided by
the per-index conditions 0 <= a_i - sigma b_i <= sigma: a violated
lower side is witnessed by balls escaping along axis i, a violated
upper side by slabs collapsing onto the hyperplane {x_i = 0}.  When the
conditions hold and additionally a - b <= 1, the infimum is positive;
for a - b > 1 positivity is undecided and reported as such.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .integrate import (
    IntegralEstimate,
    QuadratureSpec,
    weighted_surface,
    weighted_volume,
)
from .shapes import DegenerateShapeError, ShapeFamily, closed_form_orthant_ball_mass
from .weight_core import WeightPair, as_exponents, weight_pair

__all__ = [
    "QuotientReport",
    "ExistenceVerdict",
    "quotient",
    "quotient_tolerance",
    "classify_existence",
    "conditions_equivalent",
    "theorem2_constant",
    "ball_constant",
    "aggregate_reports",
    "orthant_reduction_check",
]


@dataclass(frozen=True)
class QuotientReport:
    """A perimeter/volume evaluation and the derived quotient.

    combined_rel_error propagates the two estimate errors through the
    quotient: sigma * relerr(volume) + relerr(perimeter).
    """

    perimeter: IntegralEstimate
    volume: IntegralEstimate
    quotient: float
    sigma: float
    shape_params: dict
    combined_rel_error: float

    def as_dict(self) -> dict:
        return {
            "perimeter": self.perimeter.as_dict(),
            "volume": self.volume.as_dict(),
            "quotient": self.quotient,
            "sigma": self.sigma,
            "shape_params": self.shape_params,
            "combined_rel_error": self.combined_rel_error,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True)


def quotient(shape: ShapeFamily, pair, q: QuadratureSpec | None = None) -> QuotientReport:
    """Evaluate P_A(shape) / m_B(shape)^sigma with propagated error."""
    pair = weight_pair(*pair) if isinstance(pair, tuple) else pair
    if not isinstance(pair, WeightPair):
        raise TypeError("pair must be a WeightPair or an (A, B) tuple")
    if pair.N != shape.dim:
        raise ValueError(f"weight pair has N={pair.N} but shape has dim={shape.dim}")
    volume = weighted_volume(shape, pair.B, q)
    if not math.isfinite(volume.value) or volume.value <= 0.0:
        raise DegenerateShapeError(
            f"weighted volume {volume.value!r} is not strictly positive for "
            f"{shape.describe()!r}"
        )
    perimeter = weighted_surface(shape, pair.A, q)
    sigma = pair.sigma
    value = perimeter.value / volume.value**sigma
    combined = sigma * volume.rel_error + perimeter.rel_error
    return QuotientReport(perimeter, volume, value, sigma, shape.describe(), combined)


def quotient_tolerance(*reports: QuotientReport, floor: float = 1e-6) -> float:
    """Default comparison tolerance: max(floor, 3x worst propagated error)."""
    worst = max((r.combined_rel_error for r in reports), default=0.0)
    return max(floor, 3.0 * worst)


@dataclass(frozen=True)
class ExistenceVerdict:
    """Outcome of the existence classification for one weight pair.

    status is Zero (the infimum vanishes; witness_index and
    violated_side name the offending coordinate and the side of the
    condition it breaks), Positive (conditions hold and a - b <= 1), or
    OutsideScope (conditions hold but a - b > 1, where neither
    existence nor nonexistence is established).
    """

    status: str
    witness_index: int | None
    violated_side: str | None
    theorem_basis: str
    sigma: float
    a_minus_b: float

    def as_dict(self) -> dict:
        return {
            "status": self.status,
            "witness_index": self.witness_index,
            "violated_side": self.violated_side,
            "sigma": self.sigma,
            "a_minus_b": self.a_minus_b,
            "basis": self.theorem_basis,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True)


def classify_existence(pair: WeightPair) -> ExistenceVerdict:
    """Decide whether the isoperimetric constant is zero, positive, or open.

    Checks 0 <= a_i - sigma b_i <= sigma for every index (boundary
    equalities count as satisfying) and then splits the satisfying case
    on a - b <= 1.  The witness index is the smallest violating one.
    """
    pair = weight_pair(*pair) if isinstance(pair, tuple) else pair
    sigma = pair.sigma
    a_minus_b = pair.a - pair.b
    for i in range(1, pair.N + 1):
        margin = pair.A[i - 1] - sigma * pair.B[i - 1]
        if margin < 0.0:
            return ExistenceVerdict(
                "Zero", i, "lower", "necessary-condition-violated", sigma, a_minus_b
            )
        if margin > sigma:
            return ExistenceVerdict(
                "Zero", i, "upper", "necessary-condition-violated", sigma, a_minus_b
            )
    if a_minus_b <= 1.0:
        return ExistenceVerdict(
            "Positive", None, None, "sufficient-conditions-met", sigma, a_minus_b
        )
    return ExistenceVerdict(
        "OutsideScope", None, None, "beyond-sufficiency-range", sigma, a_minus_b
    )


def _global_form_holds(pair: WeightPair) -> bool:
    sigma = pair.sigma
    return all(
        0.0 <= a_i - sigma * b_i <= sigma for a_i, b_i in zip(pair.A, pair.B)
    )


def _per_index_form_holds(pair: WeightPair) -> bool:
    N, a, b = pair.N, pair.a, pair.b
    for a_i, b_i in zip(pair.A, pair.B):
        abar = a - a_i
        bbar = b - b_i
        if a_i - (N + abar - 1.0) / (N + bbar) * b_i < 0.0:
            return False
        if a_i / (b_i + 1.0) > (N + abar - 1.0) / (N + bbar - 1.0):
            return False
    return True


def conditions_equivalent(pair: WeightPair) -> bool:
    """True when the aggregate and per-index condition forms agree.

    The aggregate form uses the single exponent sigma; the per-index
    form replaces it by ratios of the complementary sums abar_i, bbar_i.
    The two are algebraically equivalent, which this evaluates rather
    than assumes.
    """
    pair = weight_pair(*pair) if isinstance(pair, tuple) else pair
    return _global_form_holds(pair) == _per_index_form_holds(pair)


def theorem2_constant(pair: WeightPair, i: int) -> float:
    """Exact constant a_i for pairs with a_j = b_j off axis i, a_i = b_i + 1.

    Under those hypotheses sigma = 1 and the infimum of P_A / m_B is
    attained in the limit of slabs collapsing onto {x_i = 0}, with
    value a_i.  The index is 1-based.
    """
    pair = weight_pair(*pair) if isinstance(pair, tuple) else pair
    if not 1 <= i <= pair.N:
        raise IndexError(f"index {i} out of range for N={pair.N}")
    for j in range(1, pair.N + 1):
        if j == i:
            continue
        if pair.A[j - 1] != pair.B[j - 1]:
            raise ValueError(
                f"hypothesis a_j = b_j fails at j={j}: "
                f"a_{j}={pair.A[j - 1]}, b_{j}={pair.B[j - 1]}"
            )
    a_i, b_i = pair.A[i - 1], pair.B[i - 1]
    if a_i != b_i + 1.0:
        raise ValueError(f"hypothesis a_i = b_i + 1 fails: a_{i}={a_i}, b_{i}={b_i}")
    return a_i


def ball_constant(A) -> float:
    """Isoperimetric constant D * m_A(B_1^A)^(1/D) of the equal-weight case.

    B_1^A is the unit ball restricted to the admissible cone of A
    (coordinates with a_i > 0 positive, the rest full range), whose
    perimeter equals D times its mass by homogeneity.
    """
    A = as_exponents(A)
    D = len(A) + A.total
    mass = closed_form_orthant_ball_mass(A) * 2.0 ** (len(A) - A.positive_count)
    return D * mass ** (1.0 / D)


def aggregate_reports(reports: list[QuotientReport], sigma: float | None = None) -> QuotientReport:
    """Combine disjoint pieces into one report by additivity.

    Perimeters and volumes add (pieces meet only along weight-null
    hyperplanes); the quotient is recomputed from the sums.
    """
    if not reports:
        raise ValueError("need at least one report")
    if sigma is None:
        sigma = reports[0].sigma
    if any(r.sigma != sigma for r in reports):
        raise ValueError("reports carry different sigma exponents")

    def total(parts: list[IntegralEstimate]) -> IntegralEstimate:
        return IntegralEstimate(
            value=sum(p.value for p in parts),
            abs_error_est=sum(p.abs_error_est for p in parts),
            evaluations=sum(p.evaluations for p in parts),
            converged=all(p.converged for p in parts),
        )

    perimeter = total([r.perimeter for r in reports])
    volume = total([r.volume for r in reports])
    value = perimeter.value / volume.value**sigma
    combined = sigma * volume.rel_error + perimeter.rel_error
    params = {"family": "union", "pieces": [r.shape_params for r in reports]}
    return QuotientReport(perimeter, volume, value, sigma, params, combined)


def orthant_reduction_check(
    pieces: list[QuotientReport],
    whole: QuotientReport,
    pair: WeightPair,
    tol: float | None = None,
) -> bool:
    """Whole-shape quotient is never below the worst orthant piece.

    For a - b <= 1 (so sigma <= 1), superadditivity of x -> x^sigma
    gives quotient(union) >= min over pieces; this is why minimizing
    over shapes inside one orthant suffices.
    """
    pair = weight_pair(*pair) if isinstance(pair, tuple) else pair
    if pair.a - pair.b > 1.0:
        raise ValueError(f"requires a - b <= 1, got {pair.a - pair.b}")
    if not pieces:
        raise ValueError("need at least one piece")
    if tol is None:
        tol = quotient_tolerance(whole, *pieces)
    return whole.quotient >= min(r.quotient for r in pieces) - tol
