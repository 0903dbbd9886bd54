"""Quotient sweeps along the extremal families and rate fitting.

Two one-parameter families drive the nonexistence results: balls
B_r(t e_i) escaping to infinity (quotient ~ t^(a_i - sigma b_i)) and
slabs pinching onto {x_i = 0} (quotient ~ eps^(a_i - sigma (b_i+1))).
This module evaluates quotients along geometric parameter schedules,
fits the decay exponent by least squares in log-log coordinates, and
extrapolates the sharp ratio limit of the boundary-equality case.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .integrate import QuadratureSpec, estimate_cells, weighted_surface, weighted_volume
from .isoperimetry import QuotientReport, quotient, theorem2_constant
from .shapes import ConeSlab, DegenerateShapeError, ShapeFamily, TranslatedBall
from .weight_core import WeightPair, weight_pair

__all__ = [
    "SweepSchedule",
    "PowerLawFit",
    "sweep",
    "fit_power_law",
    "predicted_exponent",
    "sharp_ratio_limit",
    "boundary_term_breakdown",
]


@dataclass(frozen=True)
class SweepSchedule:
    """Geometric parameter schedule start * ratio^k, k = 0..count-1.

    Constant log spacing keeps the log-log least squares problem well
    conditioned.  parameter_name selects the family's free parameter:
    "t" for the escaping ball, "eps" for the collapsing slab.
    """

    parameter_name: str
    start: float
    ratio: float
    count: int

    def __post_init__(self):
        if self.parameter_name not in ("t", "eps"):
            raise ValueError(f"unknown parameter {self.parameter_name!r}")
        if not (self.start > 0 and self.ratio > 0):
            raise ValueError("start and ratio must be positive")
        if self.ratio == 1.0:
            raise ValueError("ratio 1 is not strictly monotone")
        if self.count < 5:
            raise ValueError(f"count must be >= 5, got {self.count}")

    @property
    def values(self) -> tuple[float, ...]:
        return tuple(self.start * self.ratio**k for k in range(self.count))


@dataclass(frozen=True)
class PowerLawFit:
    """Least-squares fit quotient ~ exp(intercept) * parameter^exponent."""

    exponent: float
    intercept: float
    stderr: float
    r_squared: float


def sweep(
    family_template: ShapeFamily,
    schedule: SweepSchedule,
    pair,
    q: QuadratureSpec | None = None,
) -> list[QuotientReport]:
    """One QuotientReport per schedule value, evaluated independently."""
    if schedule.parameter_name == "t":
        if not isinstance(family_template, TranslatedBall):
            raise ValueError("parameter 't' sweeps a TranslatedBall template")
    else:
        if not isinstance(family_template, ConeSlab):
            raise ValueError("parameter 'eps' sweeps a ConeSlab template")
    reports = []
    for value in schedule.values:
        shape = replace(family_template, **{schedule.parameter_name: value})
        try:
            reports.append(quotient(shape, pair, q))
        except DegenerateShapeError as exc:
            raise DegenerateShapeError(
                f"degenerate shape at {schedule.parameter_name}={value}: {exc}"
            ) from exc
    return reports


def fit_power_law(
    reports: list[QuotientReport],
    schedule: SweepSchedule,
    tail_fraction: float = 1.0,
) -> PowerLawFit:
    """OLS of log(quotient) on log(parameter).

    tail_fraction < 1 keeps only the trailing part of the schedule
    (the last-half convention suppresses pre-asymptotic contamination
    when estimating a limiting rate).
    """
    params = np.asarray(schedule.values[: len(reports)])
    values = np.asarray([r.quotient for r in reports])
    if len(values) < 3:
        raise ValueError("need at least 3 reports to fit")
    if np.any(values <= 0.0) or not np.all(np.isfinite(values)):
        raise ValueError("quotients must be positive and finite to fit a power law")
    if not 0.0 < tail_fraction <= 1.0:
        raise ValueError("tail_fraction must be in (0, 1]")
    keep = max(3, math.ceil(tail_fraction * len(values)))
    params, values = params[-keep:], values[-keep:]

    x = np.log(params)
    y = np.log(values)
    n = len(x)
    xbar = x.mean()
    sxx = float(np.sum((x - xbar) ** 2))
    slope = float(np.sum((x - xbar) * (y - y.mean())) / sxx)
    intercept = float(y.mean() - slope * xbar)
    resid = y - (intercept + slope * x)
    ss_res = float(np.sum(resid**2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    stderr = math.sqrt(ss_res / (n - 2) / sxx) if n > 2 else 0.0
    if ss_tot > 0.0:
        r_squared = max(0.0, 1.0 - ss_res / ss_tot)
    else:
        r_squared = 1.0 if ss_res <= 1e-20 else 0.0
    return PowerLawFit(slope, intercept, stderr, r_squared)


def predicted_exponent(pair, i: int, family) -> float:
    """Leading decay exponent of the quotient along the named family.

    TranslatedBall drifts with t^(a_i - sigma b_i); ConeSlab pinches
    with eps^(a_i - sigma (b_i + 1)).  `family` may be the class or the
    CLI family name.  The index is 1-based.
    """
    pair = weight_pair(*pair) if isinstance(pair, tuple) else pair
    if not 1 <= i <= pair.N:
        raise IndexError(f"index {i} out of range for N={pair.N}")
    name = family if isinstance(family, str) else family.__name__
    a_i, b_i = pair.A[i - 1], pair.B[i - 1]
    if name in ("TranslatedBall", "tball"):
        return a_i - pair.sigma * b_i
    if name in ("ConeSlab", "cone-slab"):
        return a_i - pair.sigma * (b_i + 1.0)
    raise ValueError(f"unknown family {family!r}")


@dataclass(frozen=True)
class SharpRatioResult:
    """Extrapolated slab limit of the unnormalized ratio P_A / m_B."""

    ratio_at_eps: float
    ratio_at_half_eps: float
    extrapolated: float
    constant: float
    eps: float

    @property
    def relative_gap(self) -> float:
        return abs(self.extrapolated - self.constant) / self.constant


def sharp_ratio_limit(
    pair, i: int, eps: float = 1e-3, R: float = 1.0, q: QuadratureSpec | None = None
) -> SharpRatioResult:
    """Slab limit of P_A / m_B under the boundary-equality hypotheses.

    Requires a_j = b_j off axis i and a_i = b_i + 1, so sigma = 1 and
    the plain ratio is the quotient.  The ratio expands as
    a_i (1 + O(eps)); a two-point Richardson step in eps removes the
    linear term, leaving an O(eps^2) extrapolation error.
    """
    pair = weight_pair(*pair) if isinstance(pair, tuple) else pair
    constant = theorem2_constant(pair, i)

    def ratio(e: float) -> float:
        shape = ConeSlab(pair.N, i, e, R)
        per = weighted_surface(shape, pair.A, q)
        vol = weighted_volume(shape, pair.B, q)
        return per.value / vol.value

    r1 = ratio(eps)
    r2 = ratio(eps / 2.0)
    return SharpRatioResult(r1, r2, 2.0 * r2 - r1, constant, eps)


def boundary_term_breakdown(
    pair,
    i: int,
    schedule: SweepSchedule,
    R: float = 1.0,
    q: QuadratureSpec | None = None,
    dominance_threshold: float = 0.25,
) -> dict:
    """Per-piece perimeter contributions at the tail of a slab schedule.

    Evaluates P_A piece by piece at the two smallest schedule values,
    estimates each piece's own eps-exponent, and names the dominant
    piece.  `subdominant_ok` is False when the other pieces still carry
    more than dominance_threshold of the dominant one at the smallest
    eps, i.e. when the observed quotient rate cannot yet be attributed
    to the leading term alone.
    """
    pair = weight_pair(*pair) if isinstance(pair, tuple) else pair
    if schedule.parameter_name != "eps":
        raise ValueError("breakdown applies to 'eps' schedules")
    eps_small, eps_prev = sorted(schedule.values)[:2]

    def piece_values(e: float) -> dict[str, float]:
        shape = ConeSlab(pair.N, i, e, R)
        out = {}
        for piece in shape.boundary_pieces():
            cells = piece.surface_cells(pair.A)
            if cells:
                out[piece.label] = estimate_cells(cells, q).value
        return out

    at_small = piece_values(eps_small)
    at_prev = piece_values(eps_prev)
    exponents = {}
    for label, v_small in at_small.items():
        v_prev = at_prev.get(label, 0.0)
        if v_small > 0.0 and v_prev > 0.0:
            exponents[label] = math.log(v_prev / v_small) / math.log(eps_prev / eps_small)
    dominant = max(at_small, key=at_small.get)
    rest = sum(v for label, v in at_small.items() if label != dominant)
    lower_order_ratio = rest / at_small[dominant] if at_small[dominant] > 0 else math.inf
    return {
        "eps": eps_small,
        "piece_values": at_small,
        "piece_exponents": exponents,
        "dominant_piece": dominant,
        "lower_order_ratio": lower_order_ratio,
        "subdominant_ok": lower_order_ratio <= dominance_threshold,
    }
