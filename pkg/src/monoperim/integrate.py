"""Weighted quadrature and Monte Carlo for monomial-weight integrals.

Everything integrable here reduces to tensor products of 1-D rules on
[0, 1] against the weight u^alpha (1-u)^beta, the endpoint powers coming
from the monomial weight and the radial/angular reductions of the shape
parametrizations.  Nodes and weights come from the Jacobi orthogonal
polynomial recurrence (Golub-Welsch); a rule with n nodes integrates
u^alpha (1-u)^beta p(u) exactly for polynomials p up to degree 2n-1.

Shapes supply their integrands as ProductCell records: a constant, a
list of weighted axes, and an optional smooth factor depending on a
subset of the axes.  Axes the smooth factor does not touch are exact at
any node count (their rule's total weight is the moment), so adaptive
refinement only ever doubles the active axes.

The Monte Carlo estimators are deliberately a separate code path used
to cross-check the quadrature: volumes sample a bounding box from the
per-coordinate power densities proportional to |x|^b_i (which cancels
the weight exactly, leaving a hit count), surfaces sample the boundary
charts uniformly and reweight by the area element.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.special import roots_jacobi

from .weight_core import as_exponents, eval_weight

__all__ = [
    "QuadratureSpec",
    "MCSpec",
    "IntegralEstimate",
    "MCEstimate",
    "CellAxis",
    "ProductCell",
    "gauss_weighted_nodes",
    "jacobi_rule_01",
    "estimate_cells",
    "weighted_volume",
    "weighted_surface",
    "mc_volume",
    "mc_surface",
]

_DEPTH_ENV = "MONOPERIM_QUAD_DEPTH"


def _default_depth() -> int:
    raw = os.environ.get(_DEPTH_ENV)
    if raw is None:
        return 6
    depth = int(raw)
    if depth < 0:
        raise ValueError(f"{_DEPTH_ENV} must be >= 0, got {depth}")
    return depth


@dataclass(frozen=True)
class QuadratureSpec:
    """Controls the tensor Gauss engine.

    nodes_per_axis is the base rule size; refinement doubles whichever
    active axis disagrees most until the n-vs-2n difference drops below
    rel_tol or max_refinement_depth doublings have been spent.  The
    default depth can be overridden with the MONOPERIM_QUAD_DEPTH
    environment variable.
    """

    nodes_per_axis: int = 16
    rel_tol: float = 1e-10
    max_refinement_depth: int = field(default_factory=_default_depth)

    def __post_init__(self):
        if self.nodes_per_axis < 2:
            raise ValueError("nodes_per_axis must be >= 2")
        if not (0.0 < self.rel_tol < 1.0):
            raise ValueError("rel_tol must lie in (0, 1)")
        if self.max_refinement_depth < 0:
            raise ValueError("max_refinement_depth must be >= 0")


@dataclass(frozen=True)
class MCSpec:
    """Sample count and seed for the Monte Carlo estimators."""

    sample_count: int = 100_000
    seed: int = 0
    batch_size: int = 262_144

    def __post_init__(self):
        if self.sample_count < 1000:
            raise ValueError("sample_count must be >= 1000")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")


@dataclass(frozen=True)
class IntegralEstimate:
    """A quadrature value with an n-vs-2n error estimate."""

    value: float
    abs_error_est: float
    evaluations: int
    converged: bool = True

    def as_dict(self) -> dict:
        return {
            "value": self.value,
            "abs_error_est": self.abs_error_est,
            "evaluations": self.evaluations,
            "converged": self.converged,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True)

    @property
    def rel_error(self) -> float:
        if self.value == 0.0:
            return 0.0 if self.abs_error_est == 0.0 else math.inf
        return abs(self.abs_error_est / self.value)


@dataclass(frozen=True)
class MCEstimate:
    """A Monte Carlo value with its standard error.

    Exposes abs_error_est and evaluations aliases so downstream code can
    treat quadrature and Monte Carlo estimates interchangeably.
    """

    value: float
    stderr: float
    sample_count: int
    seed: int

    @property
    def abs_error_est(self) -> float:
        return self.stderr

    @property
    def evaluations(self) -> int:
        return self.sample_count

    def as_dict(self) -> dict:
        return {
            "value": self.value,
            "stderr": self.stderr,
            "sample_count": self.sample_count,
            "seed": self.seed,
        }


@lru_cache(maxsize=4096)
def _rule_01(n: int, alpha: float, beta: float) -> tuple[np.ndarray, np.ndarray]:
    if n < 1:
        raise ValueError(f"need at least one node, got n = {n}")
    if alpha <= -1.0 or beta <= -1.0:
        raise ValueError(f"endpoint exponents must exceed -1, got ({alpha}, {beta})")
    try:
        # scipy weighs (1-x)^p (1+x)^q on [-1, 1]; our left exponent alpha
        # multiplies (1+x) after the affine map u = (1+x)/2.
        x, w = roots_jacobi(n, beta, alpha)
    except Exception as exc:  # pragma: no cover - scipy failure path
        raise ValueError(
            f"orthogonal polynomial recurrence failed for n={n}, "
            f"alpha={alpha}, beta={beta}: {exc}"
        ) from exc
    nodes = 0.5 * (x + 1.0)
    weights = w * 2.0 ** (-(alpha + beta + 1.0))
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def jacobi_rule_01(n: int, alpha: float, beta: float = 0.0):
    """Nodes and weights for int_0^1 u^alpha (1-u)^beta f(u) du."""
    nodes, weights = _rule_01(int(n), float(alpha), float(beta))
    return nodes.copy(), weights.copy()


def gauss_weighted_nodes(n: int, alpha: float):
    """Generalized Gauss rule on [0, 1] against the weight x^alpha.

    Exact for integrands x^alpha p(x) with p polynomial of degree
    <= 2n - 1.  For n = 1, alpha = 1 this is the single node 2/3 with
    weight 1/2.
    """
    return jacobi_rule_01(n, alpha, 0.0)


@dataclass(frozen=True)
class CellAxis:
    """One tensor axis on [0,1] with weight u^alpha (1-u)^beta."""

    alpha: float
    beta: float = 0.0


@dataclass(frozen=True)
class ProductCell:
    """constant * prod_j int_0^1 u^alpha_j (1-u)^beta_j du  x  smooth factor.

    smooth, when present, receives an (m, len(active)) array whose
    columns are the coordinates of the axes listed in `active` and
    returns (m,) values.  It must be bounded on (0,1)^d; every endpoint
    singularity belongs in the axis exponents.
    """

    constant: float
    axes: tuple[CellAxis, ...]
    smooth: Callable[[np.ndarray], np.ndarray] | None = None
    active: tuple[int, ...] = ()
    label: str = ""

    def __post_init__(self):
        if self.smooth is None and self.active:
            raise ValueError("active axes given without a smooth factor")
        if self.smooth is not None and not self.active:
            raise ValueError("smooth factor given without active axes")
        for j in self.active:
            if not 0 <= j < len(self.axes):
                raise ValueError(f"active axis {j} out of range")


def _eval_cell(cell: ProductCell, n_active: dict[int, int], n_base: int) -> tuple[float, int]:
    """Evaluate the cell; returns (value, smooth evaluations used)."""
    const = cell.constant
    for j, ax in enumerate(cell.axes):
        if j in cell.active:
            continue
        _, w = _rule_01(n_base, ax.alpha, ax.beta)
        const *= float(w.sum())
    if cell.smooth is None:
        return const, 0
    grids = []
    wgts = []
    for j in cell.active:
        ax = cell.axes[j]
        x, w = _rule_01(n_active[j], ax.alpha, ax.beta)
        grids.append(x)
        wgts.append(w)
    mesh = np.meshgrid(*grids, indexing="ij")
    U = np.stack([m.ravel() for m in mesh], axis=1)
    vals = np.asarray(cell.smooth(U), dtype=float)
    wmesh = np.meshgrid(*wgts, indexing="ij")
    wall = np.ones_like(wmesh[0])
    for wm in wmesh:
        wall = wall * wm
    total = float(np.sum(vals * wall.ravel()))
    return const * total, U.shape[0]


def _estimate_cell(cell: ProductCell, spec: QuadratureSpec) -> IntegralEstimate:
    if cell.constant == 0.0:
        return IntegralEstimate(0.0, 0.0, 0, True)
    n0 = spec.nodes_per_axis
    if cell.smooth is None:
        v1, _ = _eval_cell(cell, {}, n0)
        v2, _ = _eval_cell(cell, {}, 2 * n0)
        return IntegralEstimate(v2, abs(v2 - v1), 0, True)
    n_active = {j: n0 for j in cell.active}
    evals = 0
    value, used = _eval_cell(cell, n_active, n0)
    evals += used
    for depth in range(spec.max_refinement_depth + 1):
        refined, used = _eval_cell(cell, {j: 2 * n for j, n in n_active.items()}, n0)
        evals += used
        err = abs(refined - value)
        if err <= spec.rel_tol * max(abs(refined), 1e-300):
            return IntegralEstimate(refined, err, evals, True)
        if depth == spec.max_refinement_depth:
            return IntegralEstimate(refined, err, evals, False)
        if len(cell.active) == 1:
            j_worst = cell.active[0]
            value = refined
            n_active[j_worst] *= 2
            continue
        # probe each axis alone; double the one that moves the value most
        best_j, best_val, best_diff = None, None, -1.0
        for j in cell.active:
            probe = dict(n_active)
            probe[j] *= 2
            vj, used = _eval_cell(cell, probe, n0)
            evals += used
            dj = abs(vj - value)
            if dj > best_diff:
                best_j, best_val, best_diff = j, vj, dj
        n_active[best_j] *= 2
        value = best_val
    raise AssertionError("unreachable")


def estimate_cells(cells, spec: QuadratureSpec | None = None) -> IntegralEstimate:
    """Sum the cell estimates; errors add, convergence is the conjunction."""
    spec = spec or QuadratureSpec()
    total, err, evals, ok = 0.0, 0.0, 0, True
    for cell in cells:
        est = _estimate_cell(cell, spec)
        total += est.value
        err += est.abs_error_est
        evals += est.evaluations
        ok = ok and est.converged
    return IntegralEstimate(total, err, evals, ok)


def weighted_volume(shape, B, q: QuadratureSpec | None = None) -> IntegralEstimate:
    """int_shape x^B dx by tensor Gauss rules on the shape's cells."""
    B = as_exponents(B)
    if len(B) != shape.dim:
        raise ValueError(f"exponent length {len(B)} != shape dimension {shape.dim}")
    return estimate_cells(shape.volume_cells(B), q)


def weighted_surface(shape, A, q: QuadratureSpec | None = None) -> IntegralEstimate:
    """int_boundary x^A dH^(N-1) over all boundary pieces.

    Pieces lying in a hyperplane {x_k = 0} with a_k > 0 contribute
    exactly zero and are skipped.
    """
    A = as_exponents(A)
    if len(A) != shape.dim:
        raise ValueError(f"exponent length {len(A)} != shape dimension {shape.dim}")
    cells = []
    for piece in shape.boundary_pieces():
        cells.extend(piece.surface_cells(A))
    return estimate_cells(cells, q)


def _signed_power(y: np.ndarray, p: float) -> np.ndarray:
    return np.sign(y) * np.abs(y) ** p


def mc_volume(shape, B, mc: MCSpec | None = None) -> MCEstimate:
    """Importance-sampled hit counting for int_shape x^B dx.

    Each coordinate is drawn from the density proportional to |x|^b_i
    on the shape's bounding box, which cancels the weight exactly; the
    estimator is the weighted box mass times the hit fraction.
    """
    mc = mc or MCSpec()
    B = as_exponents(B)
    if len(B) != shape.dim:
        raise ValueError(f"exponent length {len(B)} != shape dimension {shape.dim}")
    lo, hi = shape.bounding_box()
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    bp1 = B.as_array() + 1.0
    f_lo = _signed_power(lo, bp1)
    f_hi = _signed_power(hi, bp1)
    box_mass = float(np.prod((f_hi - f_lo) / bp1))
    if box_mass == 0.0:
        return MCEstimate(0.0, 0.0, mc.sample_count, mc.seed)
    n_total = mc.sample_count
    n_batches = (n_total + mc.batch_size - 1) // mc.batch_size
    children = np.random.SeedSequence(mc.seed).spawn(n_batches)
    hits = 0
    done = 0
    for child in children:
        m = min(mc.batch_size, n_total - done)
        rng = np.random.default_rng(child)
        u = rng.random((m, len(B)))
        y = f_lo + u * (f_hi - f_lo)
        x = _signed_power(y, 1.0 / bp1)
        hits += int(np.count_nonzero(shape.contains(x)))
        done += m
    p = hits / n_total
    value = box_mass * p
    stderr = abs(box_mass) * math.sqrt(max(p * (1.0 - p), 0.0) / n_total)
    return MCEstimate(value, stderr, n_total, mc.seed)


def mc_surface(shape, A, mc: MCSpec | None = None) -> MCEstimate:
    """Uniform chart sampling of int_boundary x^A dH^(N-1).

    Every piece is sampled in its parameter box and reweighted by the
    (bounded) area element; weight-vanishing and degenerate pieces
    contribute zero exactly.
    """
    mc = mc or MCSpec()
    A = as_exponents(A)
    if len(A) != shape.dim:
        raise ValueError(f"exponent length {len(A)} != shape dimension {shape.dim}")
    pieces = [
        p
        for p in shape.boundary_pieces()
        if not p.degenerate and not p.vanishing_weight(A)
    ]
    if not pieces:
        return MCEstimate(0.0, 0.0, mc.sample_count, mc.seed)
    children = np.random.SeedSequence(mc.seed).spawn(len(pieces))
    n_each = max(mc.sample_count // len(pieces), 2)
    total = 0.0
    var = 0.0
    used = 0
    for piece, child in zip(pieces, children):
        lo = np.asarray(piece.param_lo, dtype=float)
        hi = np.asarray(piece.param_hi, dtype=float)
        pvol = float(np.prod(hi - lo))
        if pvol == 0.0:
            continue
        rng = np.random.default_rng(child)
        u = lo + rng.random((n_each, lo.size)) * (hi - lo)
        x = piece.chart(u)
        vals = np.asarray(eval_weight(x, A), dtype=float) * piece.area_element(u)
        total += float(np.mean(vals)) * pvol
        var += float(np.var(vals, ddof=1)) / n_each * pvol**2
        used += n_each
    return MCEstimate(total, math.sqrt(var), used, mc.seed)
