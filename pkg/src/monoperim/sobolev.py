"""Functional side of the weighted inequalities.

Closed-form best constants of the weighted Sobolev inequality, grid
functions with exact per-cell moment weights for evaluating the
functional quotient Q(u) = int |grad u| x^A / (int |u|^p x^B)^sigma
with p = (N+b)/(N+a-1), mollified indicators bridging set quotients
and function quotients, the one-dimensional integration-by-parts
inequality, and the coarea lower-bound chain.

Grid integration never samples the weight pointwise near the
coordinate hyperplanes: each node carries the exact x^E mass of its
grid cell, computed from the antiderivative sign(x)|x|^(e+1)/(e+1),
so integrable singularities at x_i = 0 cost no accuracy.
"""

from __future__ import annotations

import json
import math
import struct
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Callable

import numpy as np
from scipy import ndimage

from ._gamma import gamma_fn, ln_gamma
from .integrate import jacobi_rule_01
from .shapes import ShapeFamily
from .weight_core import WeightPair, as_exponents, eval_weight, weight_pair

__all__ = [
    "GridFunction",
    "MollifierSpec",
    "standard_bump",
    "kernel_mass",
    "mollified_indicator",
    "functional_quotient",
    "best_constant_p1",
    "best_constant",
    "ibp_inequality_check",
    "coarea_chain_report",
    "coarea_lower_bound_check",
]

_MAGIC = b"MPGF"
_VERSION = 1


def _power_antiderivative(x: np.ndarray, e: float) -> np.ndarray:
    """F with F'(x) = |x|^e, odd extension: sign(x)|x|^(e+1)/(e+1)."""
    x = np.asarray(x, dtype=float)
    return np.sign(x) * np.abs(x) ** (e + 1.0) / (e + 1.0)


@dataclass(frozen=True)
class GridFunction:
    """Values on a uniform node grid over the box [lo, hi].

    Nodes sit at lo + j*h per axis with the endpoints included.  When
    compact_support is set, the boundary slices must vanish, so
    one-sided difference stencils at the edge see only zeros.
    """

    lo: tuple[float, ...]
    hi: tuple[float, ...]
    spacing: tuple[float, ...]
    values: np.ndarray
    compact_support: bool = True

    def __post_init__(self):
        lo = tuple(float(v) for v in self.lo)
        hi = tuple(float(v) for v in self.hi)
        spacing = tuple(float(v) for v in self.spacing)
        values = np.ascontiguousarray(self.values, dtype=float)
        if not (len(lo) == len(hi) == len(spacing) == values.ndim):
            raise ValueError("lo, hi, spacing, and values dimensions disagree")
        for k, (l, h, s) in enumerate(zip(lo, hi, spacing)):
            if not (s > 0 and h > l):
                raise ValueError(f"axis {k + 1}: need hi > lo and positive spacing")
            n = values.shape[k]
            if n < 2:
                raise ValueError(f"axis {k + 1}: need at least 2 nodes")
            if abs(l + (n - 1) * s - h) > 1e-9 * max(1.0, abs(h - l)):
                raise ValueError(
                    f"axis {k + 1}: {n} nodes at spacing {s} do not span [{l}, {h}]"
                )
        if self.compact_support:
            for k in range(values.ndim):
                edge = max(
                    np.abs(np.take(values, 0, axis=k)).max(),
                    np.abs(np.take(values, -1, axis=k)).max(),
                )
                peak = np.abs(values).max()
                if edge > 1e-10 * max(peak, 1.0):
                    raise ValueError(
                        f"compact_support set but values reach {edge} on the "
                        f"axis-{k + 1} boundary"
                    )
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        object.__setattr__(self, "spacing", spacing)
        object.__setattr__(self, "values", values)

    @property
    def dim(self) -> int:
        return self.values.ndim

    def axis_nodes(self, k: int) -> np.ndarray:
        """Node coordinates along 1-based axis k."""
        n = self.values.shape[k - 1]
        return self.lo[k - 1] + self.spacing[k - 1] * np.arange(n)

    def axis_weights(self, k: int, e: float) -> np.ndarray:
        """Exact |x|^e masses of the node cells along 1-based axis k.

        Node j owns the half-open slab between the midpoints to its
        neighbours, clipped to [lo, hi]; the mass comes from the
        antiderivative, so the weights are exact even when a cell
        straddles x = 0.
        """
        x = self.axis_nodes(k)
        mids = 0.5 * (x[:-1] + x[1:])
        lefts = np.concatenate(([self.lo[k - 1]], mids))
        rights = np.concatenate((mids, [self.hi[k - 1]]))
        return _power_antiderivative(rights, e) - _power_antiderivative(lefts, e)

    def integrate_weighted(self, E, integrand: np.ndarray | None = None) -> float:
        """int f(x) x^E dx with f nodal (defaults to the stored values)."""
        E = as_exponents(E)
        if len(E) != self.dim:
            raise ValueError(f"exponent vector length {len(E)} != dim {self.dim}")
        acc = np.array(self.values if integrand is None else integrand, dtype=float)
        if acc.shape != self.values.shape:
            raise ValueError("integrand shape does not match the grid")
        for k in range(self.dim):
            w = self.axis_weights(k + 1, E[k])
            shape = [1] * self.dim
            shape[k] = len(w)
            acc = acc * w.reshape(shape)
        return float(acc.sum())

    def gradient(self) -> list[np.ndarray]:
        """Centered differences inside, one-sided at the grid edge."""
        grads = np.gradient(self.values, *self.spacing, edge_order=1)
        return [grads] if isinstance(grads, np.ndarray) else list(grads)

    def gradient_norm(self) -> np.ndarray:
        return np.sqrt(sum(g * g for g in self.gradient()))

    def save(self, path) -> None:
        """Flat binary layout plus a JSON sidecar at <path>.json."""
        path = Path(path)
        ndim = self.dim
        header = struct.pack("<4sII", _MAGIC, _VERSION, ndim)
        header += struct.pack("<B", 1 if self.compact_support else 0)
        header += struct.pack(f"<{ndim}q", *self.values.shape)
        header += struct.pack(f"<{ndim}d", *self.lo)
        header += struct.pack(f"<{ndim}d", *self.hi)
        header += struct.pack(f"<{ndim}d", *self.spacing)
        path.write_bytes(header + self.values.tobytes(order="C"))
        sidecar = {
            "dims": list(self.values.shape),
            "lo": list(self.lo),
            "hi": list(self.hi),
            "spacing": list(self.spacing),
            "compact_support": self.compact_support,
            "dtype": "float64",
            "order": "C",
        }
        Path(str(path) + ".json").write_text(json.dumps(sidecar, sort_keys=True))

    @classmethod
    def load(cls, path) -> "GridFunction":
        raw = Path(path).read_bytes()
        magic, version, ndim = struct.unpack_from("<4sII", raw, 0)
        if magic != _MAGIC:
            raise ValueError(f"not a grid-function file: bad magic {magic!r}")
        if version != _VERSION:
            raise ValueError(f"unsupported version {version}")
        off = struct.calcsize("<4sII")
        (flag,) = struct.unpack_from("<B", raw, off)
        off += 1
        shape = struct.unpack_from(f"<{ndim}q", raw, off)
        off += 8 * ndim
        lo = struct.unpack_from(f"<{ndim}d", raw, off)
        off += 8 * ndim
        hi = struct.unpack_from(f"<{ndim}d", raw, off)
        off += 8 * ndim
        spacing = struct.unpack_from(f"<{ndim}d", raw, off)
        off += 8 * ndim
        values = np.frombuffer(raw, dtype="<f8", offset=off).reshape(shape)
        return cls(lo, hi, spacing, values.copy(), bool(flag))


# ---------------------------------------------------------------------------
# mollification


def _bump_profile(r2: np.ndarray) -> np.ndarray:
    out = np.zeros_like(r2, dtype=float)
    mask = r2 < 1.0
    out[mask] = np.exp(-1.0 / (1.0 - r2[mask]))
    return out


@lru_cache(maxsize=None)
def _bump_norm(N: int) -> float:
    nodes, weights = jacobi_rule_01(200, 0.0, 0.0)
    radial = float(np.sum(weights * nodes ** (N - 1) * _bump_profile(nodes**2)))
    surface = N * math.pi ** (N / 2.0) / gamma_fn(N / 2.0 + 1.0)
    return surface * radial


def standard_bump(N: int) -> Callable[[np.ndarray], np.ndarray]:
    """The normalized bump exp(-1/(1-|x|^2)) on |x| < 1 in R^N."""
    c = 1.0 / _bump_norm(N)

    def kernel(points: np.ndarray) -> np.ndarray:
        points = np.asarray(points, dtype=float)
        return c * _bump_profile(np.sum(points * points, axis=-1))

    return kernel


def kernel_mass(kernel: Callable, N: int, nodes: int | None = None) -> float:
    """Tensor Gauss-Legendre integral of the kernel over [-1, 1]^N."""
    if nodes is None:
        nodes = 200 if N <= 2 else 80
    x, w = jacobi_rule_01(nodes, 0.0, 0.0)
    y = 2.0 * x - 1.0
    wy = 2.0 * w
    grids = np.meshgrid(*([y] * N), indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=-1)
    wgrids = np.meshgrid(*([wy] * N), indexing="ij")
    wprod = np.ones(len(pts))
    for g in wgrids:
        wprod = wprod * g.ravel()
    return float(np.sum(kernel(pts) * wprod))


@dataclass(frozen=True)
class MollifierSpec:
    """Mollification scale plus the smoothing kernel.

    kernel=None selects the standard bump (normalized per dimension at
    use time); a custom kernel must be nonnegative, supported in the
    unit ball, and integrate to 1.
    """

    epsilon: float
    kernel: Callable[[np.ndarray], np.ndarray] | None = None

    def __post_init__(self):
        if not (self.epsilon > 0):
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")

    def kernel_for(self, N: int) -> Callable[[np.ndarray], np.ndarray]:
        return self.kernel if self.kernel is not None else standard_bump(N)


def mollified_indicator(
    shape: ShapeFamily, m: MollifierSpec, lo, hi, spacing
) -> GridFunction:
    """Discrete rho_eps * chi_shape on the given node grid.

    The grid must resolve the kernel (h <= eps/5) and leave a margin of
    at least eps between the shape and the box, so the result is
    genuinely compactly supported inside the box.  The sampled kernel
    is renormalized to unit discrete mass, which keeps the convolution
    an average: values stay in [0, 1] and constant regions are exact.
    """
    N = shape.dim
    lo = tuple(float(v) for v in lo)
    hi = tuple(float(v) for v in hi)
    if np.isscalar(spacing):
        spacing = (float(spacing),) * N
    else:
        spacing = tuple(float(v) for v in spacing)
    if not (len(lo) == len(hi) == len(spacing) == N):
        raise ValueError("grid specification does not match the shape dimension")
    eps = m.epsilon
    for k, h in enumerate(spacing):
        if h > eps / 5.0 + 1e-12:
            raise ValueError(
                f"axis {k + 1}: spacing {h} too coarse, need h <= eps/5 = {eps / 5.0}"
            )
    bb_lo, bb_hi = shape.bounding_box()
    for k in range(N):
        if lo[k] > bb_lo[k] - eps or hi[k] < bb_hi[k] + eps:
            raise ValueError(
                f"axis {k + 1}: box [{lo[k]}, {hi[k]}] leaves less than eps={eps} "
                f"margin around the shape extent [{bb_lo[k]}, {bb_hi[k]}]"
            )

    counts = []
    axes = []
    for k in range(N):
        n = round((hi[k] - lo[k]) / spacing[k]) + 1
        if abs(lo[k] + (n - 1) * spacing[k] - hi[k]) > 1e-9 * max(1.0, hi[k] - lo[k]):
            raise ValueError(f"axis {k + 1}: spacing does not divide the box extent")
        counts.append(n)
        axes.append(lo[k] + spacing[k] * np.arange(n))

    grids = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=-1)
    indicator = shape.contains(pts).astype(float).reshape(counts)

    kernel = m.kernel_for(N)
    offset_axes = [np.arange(-int(eps / h), int(eps / h) + 1) * h for h in spacing]
    kgrids = np.meshgrid(*offset_axes, indexing="ij")
    kpts = np.stack([g.ravel() for g in kgrids], axis=-1) / eps
    K = kernel(kpts).reshape([len(a) for a in offset_axes])
    if np.any(K < 0):
        raise ValueError("kernel produced negative values")
    total = K.sum()
    if total <= 0:
        raise ValueError("kernel vanished on the sample grid")
    K = K / total

    u = ndimage.convolve(indicator, K, mode="constant", cval=0.0)
    np.clip(u, 0.0, 1.0, out=u)
    return GridFunction(lo, hi, spacing, u, compact_support=True)


# ---------------------------------------------------------------------------
# quotients and constants


def functional_quotient(u: GridFunction, pair, q=None) -> float:
    """Q(u) = int |grad u| x^A dx / (int |u|^p x^B dx)^sigma.

    p = (N+b)/(N+a-1) and sigma = 1/p, so indicator-like u reproduce
    the set quotient P_A / m_B^sigma.  Grid sums use the exact per-cell
    moments, so q is accepted only for interface symmetry.
    """
    pair = weight_pair(*pair) if isinstance(pair, tuple) else pair
    if pair.N != u.dim:
        raise ValueError(f"pair has N={pair.N} but grid has dim={u.dim}")
    if not u.compact_support:
        raise ValueError("functional quotient needs compact support")
    numerator = u.integrate_weighted(pair.A, u.gradient_norm())
    p = (u.dim + pair.b) / (u.dim + pair.a - 1.0)
    base = u.integrate_weighted(pair.B, np.abs(u.values) ** p)
    if base <= 0.0:
        raise ValueError("denominator integral vanished: u is (numerically) zero")
    return numerator / base**pair.sigma


def best_constant_p1(A) -> float:
    """Sharp constant at p = 1: D (prod Gamma((a_i+1)/2) / (2^k Gamma(1+D/2)))^(1/D).

    D = N + a and k counts the strictly positive exponents.  Equals the
    isoperimetric ball constant: the gradient inequality at p = 1 is
    the functional face of the same optimal set.
    """
    A = as_exponents(A)
    D = len(A) + A.total
    log_mass = -A.positive_count * math.log(2.0) - ln_gamma(1.0 + D / 2.0)
    for a_i in A:
        log_mass += ln_gamma((a_i + 1.0) / 2.0)
    return D * math.exp(log_mass / D)


def best_constant(p: float, A) -> float:
    """Sharp constant for 1 < p < D, with p' = p/(p-1).

    C_p = C_1 D^(1/D - 1 - 1/p) ((p-1)/(D-p))^(1/p')
          (p' Gamma(D) / (Gamma(D/p) Gamma(D/p')))^(1/D).
    Diverges as p -> D through the (D-p)^(-1/p') factor.
    """
    A = as_exponents(A)
    D = len(A) + A.total
    if not 1.0 < p < D:
        raise ValueError(f"p must lie in (1, D) = (1, {D}), got {p}")
    pp = p / (p - 1.0)
    log_gamma_block = (
        math.log(pp) + ln_gamma(D) - ln_gamma(D / p) - ln_gamma(D / pp)
    ) / D
    return (
        best_constant_p1(A)
        * D ** (1.0 / D - 1.0 - 1.0 / p)
        * ((p - 1.0) / (D - p)) ** (1.0 / pp)
        * math.exp(log_gamma_block)
    )


# ---------------------------------------------------------------------------
# one-dimensional inequality and the coarea chain


def ibp_inequality_check(
    y, v, a_i: float, b_i: float, tol: float = 1e-9
) -> tuple[float, float, bool]:
    """int |y|^b v dy <= (1/a) int |y|^a |v'| dy for piecewise-linear v >= 0.

    Requires a_i = b_i + 1 > 0 and zero endpoint samples.  Both sides
    are integrated in closed form cell by cell (v linear there), so the
    tent function (1-|y|)_+ with kinks on grid nodes achieves equality
    to machine precision.  Returns (lhs, rhs, lhs <= rhs + tol).
    """
    y = np.asarray(y, dtype=float)
    v = np.asarray(v, dtype=float)
    if y.ndim != 1 or y.shape != v.shape or len(y) < 2:
        raise ValueError("y and v must be matching 1-D arrays with >= 2 samples")
    if np.any(np.diff(y) <= 0):
        raise ValueError("y must be strictly increasing")
    if abs(a_i - (b_i + 1.0)) > 1e-12 * max(1.0, abs(a_i)) or not a_i > 0:
        raise ValueError(f"requires a_i = b_i + 1 > 0, got a_i={a_i}, b_i={b_i}")
    if np.any(v < 0):
        raise ValueError("v must be nonnegative")
    if v[0] != 0.0 or v[-1] != 0.0:
        raise ValueError("v must vanish at the first and last samples")

    y0, y1 = y[:-1], y[1:]
    v0 = v[:-1]
    slope = np.diff(v) / np.diff(y)
    moment_b = _power_antiderivative(y1, b_i) - _power_antiderivative(y0, b_i)
    first_b = (np.abs(y1) ** (b_i + 2.0) - np.abs(y0) ** (b_i + 2.0)) / (b_i + 2.0)
    lhs = float(np.sum((v0 - slope * y0) * moment_b + slope * first_b))
    moment_a = _power_antiderivative(y1, a_i) - _power_antiderivative(y0, a_i)
    rhs = float(np.sum(np.abs(slope) * moment_a) / a_i)
    return lhs, rhs, lhs <= rhs + tol


def coarea_chain_report(
    u: GridFunction, pair, level_count: int, rel_tol: float = 0.05
) -> dict:
    """Evaluate int |grad u| x^A >= C_hat int m_B({u>t})^sigma dt.

    C_hat is the smallest superlevel-set quotient among level_count
    sampled levels, with superlevel masses from grid-cell unions and
    perimeters from sub-node contour polylines (2-D only).  The
    right-hand side deliberately contains no perimeter inside the
    t-integral: that is the inequality the lower bound actually needs.
    """
    from skimage import measure

    pair = weight_pair(*pair) if isinstance(pair, tuple) else pair
    if pair.a - pair.b > 1.0:
        raise ValueError(f"requires a - b <= 1, got {pair.a - pair.b}")
    if u.dim != 2:
        raise NotImplementedError("superlevel contour extraction is 2-D only")
    if level_count < 1:
        raise ValueError("need at least one level")

    values = u.values
    peak = float(values.max())
    if peak <= 0.0:
        raise ValueError("u has no positive part")
    levels = (np.arange(level_count) + 0.5) / level_count * peak
    dt = peak / level_count

    lhs = u.integrate_weighted(pair.A, u.gradient_norm())
    cellmass = np.outer(u.axis_weights(1, pair.B[0]), u.axis_weights(2, pair.B[1]))

    sigma = pair.sigma
    quotients = []
    t_integral = 0.0
    for t in levels:
        mass = float(cellmass[values > t].sum())
        if mass <= 0.0:
            continue
        t_integral += mass**sigma * dt
        perim = 0.0
        for contour in measure.find_contours(values, t):
            xy = np.column_stack(
                (
                    u.lo[0] + contour[:, 0] * u.spacing[0],
                    u.lo[1] + contour[:, 1] * u.spacing[1],
                )
            )
            seg = np.diff(xy, axis=0)
            lengths = np.hypot(seg[:, 0], seg[:, 1])
            mids = 0.5 * (xy[:-1] + xy[1:])
            perim += float(np.sum(lengths * eval_weight(mids, pair.A)))
        if perim > 0.0:
            quotients.append(perim / mass**sigma)
    if not quotients:
        raise ValueError("no level produced a nonempty superlevel set")
    c_hat = min(quotients)
    rhs = c_hat * t_integral
    return {
        "lhs": lhs,
        "c_hat": c_hat,
        "t_integral": t_integral,
        "rhs": rhs,
        "levels_used": len(quotients),
        "holds": lhs >= rhs * (1.0 - rel_tol),
    }


def coarea_lower_bound_check(
    u: GridFunction, pair, level_count: int, rel_tol: float = 0.05
) -> bool:
    """True when the coarea lower-bound chain holds within rel_tol."""
    return coarea_chain_report(u, pair, level_count, rel_tol)["holds"]
