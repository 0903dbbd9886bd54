"""Parametric domains and their weighted-integral reductions.

Four families, all living in the closed positive orthant (translated
balls extend across the transverse hyperplanes, where the weight is
even):

* OrthantBall(R): the ball B_R(0) intersected with the open orthant.
* Box(lo, hi): an axis-aligned box with 0 <= lo < hi.
* TranslatedBall(axis i, t, r): the ball B_r(t e_i) with t > 2r, the
  escaping family whose quotient scales like t^(a_i - sigma b_i).
* ConeSlab(axis i, eps, R): {|x| < R, x_j > 0, x_i < eps |xbar_i|},
  the collapsing slab whose quotient scales like
  eps^(a_i - sigma (b_i + 1)).

Every family reduces its weighted volume and the weighted area of each
boundary piece to ProductCell records: monomial angular factors are
turned into Jacobi-weight axes by s = sin^2(phi), radial and profile
directions keep at most one smooth non-polynomial factor.  Boundary
pieces additionally carry bounded-area-element charts used only by the
Monte Carlo cross-check.

Axis arguments are 1-based, matching the CLI grammar (`--axis 1` is the
first coordinate).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from ._gamma import ln_gamma
from .integrate import CellAxis, ProductCell, estimate_cells, QuadratureSpec
from .weight_core import ExponentVector, as_exponents, drop_index

__all__ = [
    "DegenerateShapeError",
    "BoundaryPiece",
    "ShapeFamily",
    "OrthantBall",
    "Box",
    "TranslatedBall",
    "ConeSlab",
    "boundary_pieces",
    "closed_form_orthant_ball_mass",
    "unit_orthant_ball_moment",
    "dilate",
    "parse_shape",
]


class DegenerateShapeError(ValueError):
    """Raised when a shape has no interior or an estimate degenerates."""


# ---------------------------------------------------------------------------
# reduction helpers, valid in any dimension M >= 1


def _angular_axes(E: tuple[float, ...]) -> tuple[tuple[CellAxis, ...], float]:
    """Axes for the orthant patch of S^(M-1) against omega^E.

    Spherical angles phi_1..phi_(M-1) in [0, pi/2] factor the patch
    integral into 1-D pieces cos^p sin^q; the substitution s = sin^2
    turns each into a Jacobi-weight axis with a constant 1/2.
    """
    M = len(E)
    axes = []
    for j in range(M - 1):
        p = E[j]
        q = (M - 2 - j) + sum(E[j + 1 :])
        axes.append(CellAxis(alpha=(q - 1.0) / 2.0, beta=(p - 1.0) / 2.0))
    return tuple(axes), 0.5 ** (M - 1)


def _orthant_ball_cells(
    E: tuple[float, ...], R: float, radial_extra: float = 0.0, label: str = ""
) -> list[ProductCell]:
    """Cells for int over B_R(0) cap orthant of x^E |x|^radial_extra dx."""
    M = len(E)
    e = sum(E)
    ang_axes, ang_const = _angular_axes(E)
    power = M + e + radial_extra
    radial = CellAxis(alpha=power - 1.0)
    return [ProductCell(R**power / 1.0 * ang_const, (radial,) + ang_axes, label=label)]


def _orthant_patch_cells(E: tuple[float, ...], R: float, label: str = "") -> list[ProductCell]:
    """Cells for int over the spherical patch {|x|=R} cap orthant of x^E dH."""
    M = len(E)
    e = sum(E)
    ang_axes, ang_const = _angular_axes(E)
    return [ProductCell(R ** (M - 1 + e) * ang_const, ang_axes, label=label)]


def _box_cells(
    lo: tuple[float, ...], hi: tuple[float, ...], E: tuple[float, ...], label: str = ""
) -> list[ProductCell]:
    """Cells for int over the box of x^E dx; singular only where lo_j = 0."""
    axes = []
    active = []
    params = []
    const = 1.0
    for j, (l, h, e) in enumerate(zip(lo, hi, E)):
        if l == 0.0:
            axes.append(CellAxis(alpha=e))
            const *= h ** (e + 1.0)
        elif e == 0.0:
            axes.append(CellAxis(alpha=0.0))
            const *= h - l
        else:
            axes.append(CellAxis(alpha=0.0))
            const *= h - l
            active.append(j)
            params.append((l, h - l, e))

    if not active:
        return [ProductCell(const, tuple(axes), label=label)]

    def smooth(U: np.ndarray, params=tuple(params)) -> np.ndarray:
        out = np.ones(U.shape[0])
        for col, (l, w, e) in enumerate(params):
            out *= (l + w * U[:, col]) ** e
        return out

    return [ProductCell(const, tuple(axes), smooth, tuple(active), label=label)]


def _omega_chart(phi: np.ndarray, M: int) -> np.ndarray:
    """Directions on S^(M-1) from M-1 spherical angles (vectorized)."""
    m = phi.shape[0]
    out = np.empty((m, M))
    sinprod = np.ones(m)
    for j in range(M - 1):
        out[:, j] = sinprod * np.cos(phi[:, j])
        sinprod = sinprod * np.sin(phi[:, j])
    out[:, M - 1] = sinprod
    return out


def _angular_area(phi: np.ndarray) -> np.ndarray:
    """prod sin^(K-1-j) phi_j for K angles, the spherical area factor."""
    m, K = phi.shape
    out = np.ones(m)
    for j in range(K):
        expo = K - 1 - j
        if expo > 0:
            out = out * np.sin(phi[:, j]) ** expo
    return out


def _insert_column(values: np.ndarray, col: np.ndarray, pos: int) -> np.ndarray:
    return np.insert(values, pos, col, axis=1)


# ---------------------------------------------------------------------------
# boundary pieces


@dataclass(frozen=True)
class BoundaryPiece:
    """One chart of a shape boundary.

    `chart` maps an (m, d) array of parameters in the box
    [param_lo, param_hi] to points on the piece; `area_element` is the
    corresponding (bounded) H^(N-1) density, so uniform parameter
    sampling reweighted by it integrates surface measure.
    `cell_builder` produces the exact quadrature cells for a given
    perimeter exponent vector; it is only consulted when the weight
    does not vanish identically on the piece.
    """

    label: str
    param_lo: tuple[float, ...]
    param_hi: tuple[float, ...]
    chart: Callable[[np.ndarray], np.ndarray]
    area_element: Callable[[np.ndarray], np.ndarray]
    cell_builder: Callable[[ExponentVector], list[ProductCell]]
    hyperplane: int | None = None
    degenerate: bool = False

    def vanishing_weight(self, A) -> bool:
        """True when the piece lies in {x_k = 0} and a_k > 0."""
        if self.hyperplane is None:
            return False
        A = as_exponents(A)
        return A[self.hyperplane - 1] > 0

    def surface_cells(self, A) -> list[ProductCell]:
        A = as_exponents(A)
        if self.degenerate or self.vanishing_weight(A):
            return []
        return self.cell_builder(A)


# ---------------------------------------------------------------------------
# shape families


@dataclass(frozen=True)
class ShapeFamily:
    """Base for the four families; subclasses fill in the geometry."""

    @property
    def dim(self) -> int:
        raise NotImplementedError

    def volume_cells(self, E) -> list[ProductCell]:
        raise NotImplementedError

    def boundary_pieces(self) -> list[BoundaryPiece]:
        raise NotImplementedError

    def contains(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def bounding_box(self) -> tuple[np.ndarray, np.ndarray]:
        raise NotImplementedError

    def dilate(self, lam: float) -> "ShapeFamily":
        raise NotImplementedError

    def describe(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class OrthantBall(ShapeFamily):
    """B_R(0) intersected with the open positive orthant of R^N."""

    N: int
    R: float = 1.0

    def __post_init__(self):
        if self.N < 2:
            raise ValueError("dimension must be >= 2")
        if not (self.R > 0):
            raise ValueError("radius must be positive")

    @property
    def dim(self) -> int:
        return self.N

    def volume_cells(self, E) -> list[ProductCell]:
        E = as_exponents(E)
        return _orthant_ball_cells(E.entries, self.R, label="orthant-ball")

    def boundary_pieces(self) -> list[BoundaryPiece]:
        N, R = self.N, self.R
        pieces = [
            BoundaryPiece(
                label="spherical-patch",
                param_lo=(0.0,) * (N - 1),
                param_hi=(math.pi / 2,) * (N - 1),
                chart=lambda phi, R=R, N=N: R * _omega_chart(phi, N),
                area_element=lambda phi, R=R, N=N: R ** (N - 1) * _angular_area(phi),
                cell_builder=lambda A, R=R: _orthant_patch_cells(
                    as_exponents(A).entries, R, label="spherical-patch"
                ),
            )
        ]
        for k in range(1, N + 1):
            pieces.append(_orthant_ball_facet(N, R, k))
        return pieces

    def contains(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        inside = np.all(x > 0.0, axis=-1)
        return inside & (np.sum(x * x, axis=-1) < self.R**2)

    def bounding_box(self):
        return np.zeros(self.N), np.full(self.N, self.R)

    def dilate(self, lam: float) -> "OrthantBall":
        return replace(self, R=lam * self.R)

    def describe(self) -> dict:
        return {"family": "orthant-ball", "dim": self.N, "R": self.R}


def _orthant_ball_facet(N: int, R: float, k: int) -> BoundaryPiece:
    """Facet of the orthant ball on {x_k = 0}: an (N-1)-dim orthant ball."""
    M = N - 1

    def chart(U: np.ndarray, R=R, k=k, M=M) -> np.ndarray:
        u = U[:, :1]
        omega = _omega_chart(U[:, 1:], M)
        return _insert_column(R * u * omega, np.zeros(U.shape[0]), k - 1)

    def area(U: np.ndarray, R=R, M=M) -> np.ndarray:
        return R**M * U[:, 0] ** (M - 1) * _angular_area(U[:, 1:])

    return BoundaryPiece(
        label=f"facet-x{k}",
        param_lo=(0.0,) * M,
        param_hi=(1.0,) + (math.pi / 2,) * (M - 1),
        chart=chart,
        area_element=area,
        cell_builder=lambda A, R=R, k=k: _orthant_ball_cells(
            drop_index(A, k).entries, R, label=f"facet-x{k}"
        ),
        hyperplane=k,
    )


@dataclass(frozen=True)
class Box(ShapeFamily):
    """Axis-aligned box [lo, hi] with 0 <= lo < hi componentwise."""

    lo: tuple[float, ...]
    hi: tuple[float, ...]

    def __post_init__(self):
        lo = tuple(float(v) for v in self.lo)
        hi = tuple(float(v) for v in self.hi)
        if len(lo) != len(hi) or len(lo) < 2:
            raise ValueError("lo and hi need equal lengths >= 2")
        for l, h in zip(lo, hi):
            if not (0.0 <= l < h):
                raise ValueError(f"need 0 <= lo < hi per axis, got [{l}, {h}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def dim(self) -> int:
        return len(self.lo)

    def volume_cells(self, E) -> list[ProductCell]:
        E = as_exponents(E)
        return _box_cells(self.lo, self.hi, E.entries, label="box")

    def boundary_pieces(self) -> list[BoundaryPiece]:
        pieces = []
        N = self.dim
        for k in range(1, N + 1):
            for value in (self.lo[k - 1], self.hi[k - 1]):
                pieces.append(self._face(k, value))
        return pieces

    def _face(self, k: int, value: float) -> BoundaryPiece:
        lo_f = tuple(l for j, l in enumerate(self.lo, start=1) if j != k)
        hi_f = tuple(h for j, h in enumerate(self.hi, start=1) if j != k)
        widths = np.asarray(hi_f) - np.asarray(lo_f)
        jac = float(np.prod(widths))

        def chart(U: np.ndarray, lo_f=np.asarray(lo_f), widths=widths, k=k, value=value):
            pts = lo_f + U * widths
            return _insert_column(pts, np.full(U.shape[0], value), k - 1)

        def builder(A, k=k, value=value, lo_f=lo_f, hi_f=hi_f):
            A = as_exponents(A)
            a_k = A[k - 1]
            scale = 1.0 if a_k == 0.0 else value**a_k
            cells = _box_cells(lo_f, hi_f, drop_index(A, k).entries, label=f"face-x{k}")
            return [replace(c, constant=scale * c.constant) for c in cells]

        return BoundaryPiece(
            label=f"face-x{k}={value:g}",
            param_lo=(0.0,) * (self.dim - 1),
            param_hi=(1.0,) * (self.dim - 1),
            chart=chart,
            area_element=lambda U, jac=jac: np.full(U.shape[0], jac),
            cell_builder=builder,
            hyperplane=k if value == 0.0 else None,
        )

    def contains(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        lo = np.asarray(self.lo)
        hi = np.asarray(self.hi)
        return np.all((x > lo) & (x < hi), axis=-1)

    def bounding_box(self):
        return np.asarray(self.lo), np.asarray(self.hi)

    def dilate(self, lam: float) -> "Box":
        return Box(tuple(lam * l for l in self.lo), tuple(lam * h for h in self.hi))

    def describe(self) -> dict:
        return {"family": "box", "dim": self.dim, "lo": list(self.lo), "hi": list(self.hi)}


@dataclass(frozen=True)
class TranslatedBall(ShapeFamily):
    """Ball B_r(t e_i) with t > 2r, drifting out along coordinate i."""

    N: int
    axis: int
    t: float
    r: float = 1.0

    def __post_init__(self):
        if self.N < 2:
            raise ValueError("dimension must be >= 2")
        if not 1 <= self.axis <= self.N:
            raise IndexError(f"axis {self.axis} out of range for N={self.N}")
        if not (self.r > 0 and self.t > 2 * self.r):
            raise ValueError(f"need t > 2r > 0, got t={self.t}, r={self.r}")

    @property
    def dim(self) -> int:
        return self.N

    def volume_cells(self, E) -> list[ProductCell]:
        E = as_exponents(E)
        i = self.axis
        b_i = E[i - 1]
        Ebar = drop_index(E, i)
        M = self.N - 1
        gam = (M + Ebar.total) / 2.0
        trans = _orthant_ball_cells(Ebar.entries, 1.0)[0]
        const = 2.0 ** (2 * gam + 1) * self.r ** (2 * gam + 1) * 2.0**M * trans.constant

        def smooth(U: np.ndarray, t=self.t, r=self.r, b_i=b_i) -> np.ndarray:
            return (t + r * (2.0 * U[:, 0] - 1.0)) ** b_i

        axes = (CellAxis(alpha=gam, beta=gam),) + trans.axes
        return [ProductCell(const, axes, smooth, (0,), label="translated-ball")]

    def boundary_pieces(self) -> list[BoundaryPiece]:
        return [self._hemisphere(+1), self._hemisphere(-1)]

    def _hemisphere(self, sign: int) -> BoundaryPiece:
        N, i, t, r = self.N, self.axis, self.t, self.r
        M = N - 1
        name = "upper-hemisphere" if sign > 0 else "lower-hemisphere"

        def builder(A, sign=sign) -> list[ProductCell]:
            A = as_exponents(A)
            a_i = A[i - 1]
            Abar = drop_index(A, i)
            abar = Abar.total
            q = M - 1 + abar
            ang_axes, ang_const = _angular_axes(Abar.entries)
            const = r ** (M + abar) * 2.0**M * ang_const

            def smooth(U: np.ndarray, t=t, r=r, a_i=a_i, q=q, sign=sign) -> np.ndarray:
                c = U[:, 0]
                return (1.0 + c) ** ((q - 1.0) / 2.0) * (t + sign * r * c) ** a_i

            axes = (CellAxis(alpha=0.0, beta=(q - 1.0) / 2.0),) + ang_axes
            return [ProductCell(const, axes, smooth, (0,), label=name)]

        if N == 2:
            other = 2 if i == 1 else 1
            lo = (-math.pi / 2,) if sign > 0 else (math.pi / 2,)
            hi = (math.pi / 2,) if sign > 0 else (3 * math.pi / 2,)

            def chart(U: np.ndarray, t=t, r=r, i=i, other=other) -> np.ndarray:
                out = np.empty((U.shape[0], 2))
                out[:, i - 1] = t + r * np.cos(U[:, 0])
                out[:, other - 1] = r * np.sin(U[:, 0])
                return out

            return BoundaryPiece(
                label=name,
                param_lo=lo,
                param_hi=hi,
                chart=chart,
                area_element=lambda U, r=r: np.full(U.shape[0], r),
                cell_builder=builder,
            )

        # N >= 3: polar angle from the axis, transverse full sphere S^(M-1)
        lo = (0.0,) + (0.0,) * (M - 2) + (0.0,)
        hi = (math.pi / 2,) + (math.pi,) * (M - 2) + (2 * math.pi,)

        def chart(U: np.ndarray, t=t, r=r, i=i, M=M, sign=sign) -> np.ndarray:
            phi = U[:, 0]
            omega = _omega_chart(U[:, 1:], M)
            xbar = r * np.sin(phi)[:, None] * omega
            return _insert_column(xbar, t + sign * r * np.cos(phi), i - 1)

        def area(U: np.ndarray, r=r, M=M) -> np.ndarray:
            return r**M * np.sin(U[:, 0]) ** (M - 1) * _angular_area(U[:, 1:])

        return BoundaryPiece(
            label=name,
            param_lo=lo,
            param_hi=hi,
            chart=chart,
            area_element=area,
            cell_builder=builder,
        )

    def contains(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        center = np.zeros(self.N)
        center[self.axis - 1] = self.t
        d = x - center
        return np.sum(d * d, axis=-1) < self.r**2

    def bounding_box(self):
        lo = np.full(self.N, -self.r)
        hi = np.full(self.N, self.r)
        lo[self.axis - 1] = self.t - self.r
        hi[self.axis - 1] = self.t + self.r
        return lo, hi

    def dilate(self, lam: float) -> "TranslatedBall":
        return replace(self, t=lam * self.t, r=lam * self.r)

    def describe(self) -> dict:
        return {
            "family": "tball",
            "dim": self.N,
            "axis": self.axis,
            "t": self.t,
            "r": self.r,
        }


def _cone_slab_volume_cells(
    N: int, i: int, eps: float, R: float, E: ExponentVector, label: str = "cone-slab"
) -> list[ProductCell]:
    """Volume cells of the slab {x_i < eps |xbar_i|} cap ball cap orthant.

    Splits at |xbar| = R/sqrt(1+eps^2): inside, x_i runs to eps |xbar|
    (the V1 term carrying the eps^(b_i+1) rate); outside, to the
    spherical cap (V2, two orders smaller in eps).  Returns [] when
    N < 2, where the slab pinches to a null set.
    """
    if N < 2:
        return []
    b_i = E[i - 1]
    Ebar = drop_index(E, i)
    btot = E.total
    M = N - 1
    R1 = R / math.sqrt(1.0 + eps * eps)
    v1 = _orthant_ball_cells(Ebar.entries, 1.0, radial_extra=b_i + 1.0, label=f"{label}-inner")[0]
    v1 = replace(v1, constant=v1.constant * eps ** (b_i + 1.0) * R1 ** (N + btot) / (b_i + 1.0))

    delta = R * R - R1 * R1
    ang_axes, ang_const = _angular_axes(Ebar.entries)
    const2 = ang_const / (b_i + 1.0) * 0.5 * delta ** ((b_i + 3.0) / 2.0)
    expo = M - 2 + Ebar.total

    def smooth(U: np.ndarray, R1=R1, delta=delta, expo=expo) -> np.ndarray:
        return (R1 * R1 + delta * U[:, 0]) ** (expo / 2.0)

    v2 = ProductCell(
        const2,
        (CellAxis(alpha=0.0, beta=(b_i + 1.0) / 2.0),) + ang_axes,
        smooth,
        (0,),
        label=f"{label}-rim",
    )
    return [v1, v2]


@dataclass(frozen=True)
class ConeSlab(ShapeFamily):
    """{|x| < R, x_j > 0 for all j, x_i < eps |xbar_i|}: a collapsing slab."""

    N: int
    axis: int
    eps: float
    R: float = 1.0

    def __post_init__(self):
        if self.N < 2:
            raise ValueError("dimension must be >= 2")
        if not 1 <= self.axis <= self.N:
            raise IndexError(f"axis {self.axis} out of range for N={self.N}")
        if not (self.eps > 0 and self.R > 0):
            raise ValueError("eps and R must be positive")

    @property
    def dim(self) -> int:
        return self.N

    @property
    def _R1(self) -> float:
        return self.R / math.sqrt(1.0 + self.eps**2)

    @property
    def _c_eps(self) -> float:
        return self.eps / math.sqrt(1.0 + self.eps**2)

    def volume_cells(self, E) -> list[ProductCell]:
        return _cone_slab_volume_cells(self.N, self.axis, self.eps, self.R, as_exponents(E))

    def boundary_pieces(self) -> list[BoundaryPiece]:
        pieces = [self._lateral_cone(), self._cap_band(), self._base_facet()]
        for k in range(1, self.N + 1):
            if k != self.axis:
                pieces.append(self._side_facet(k))
        return pieces

    def _lateral_cone(self) -> BoundaryPiece:
        N, i, eps, R1 = self.N, self.axis, self.eps, self._R1
        M = N - 1
        slope = math.sqrt(1.0 + eps * eps)

        def builder(A) -> list[ProductCell]:
            A = as_exponents(A)
            a_i = A[i - 1]
            cells = _orthant_ball_cells(
                drop_index(A, i).entries, 1.0, radial_extra=a_i, label="lateral-cone"
            )
            scale = slope * eps**a_i * R1 ** (N + A.total - 1.0)
            return [replace(c, constant=scale * c.constant) for c in cells]

        def chart(U: np.ndarray, R1=R1, eps=eps, i=i, M=M) -> np.ndarray:
            u = U[:, :1]
            xbar = R1 * u * _omega_chart(U[:, 1:], M)
            return _insert_column(xbar, eps * R1 * U[:, 0], i - 1)

        def area(U: np.ndarray, R1=R1, M=M, slope=slope) -> np.ndarray:
            return slope * R1**M * U[:, 0] ** (M - 1) * _angular_area(U[:, 1:])

        return BoundaryPiece(
            label="lateral-cone",
            param_lo=(0.0,) * M,
            param_hi=(1.0,) + (math.pi / 2,) * (M - 1),
            chart=chart,
            area_element=area,
            cell_builder=builder,
        )

    def _cap_band(self) -> BoundaryPiece:
        N, i, R, c_eps = self.N, self.axis, self.R, self._c_eps
        M = N - 1

        def builder(A) -> list[ProductCell]:
            A = as_exponents(A)
            a_i = A[i - 1]
            Abar = drop_index(A, i)
            ang_axes, ang_const = _angular_axes(Abar.entries)
            const = R ** (N + A.total - 1.0) * ang_const * c_eps ** (a_i + 1.0)
            expo = (M - 2.0 + Abar.total) / 2.0

            def smooth(U: np.ndarray, c_eps=c_eps, expo=expo) -> np.ndarray:
                return (1.0 - (c_eps * U[:, 0]) ** 2) ** expo

            axes = (CellAxis(alpha=a_i),) + ang_axes
            return [ProductCell(const, axes, smooth, (0,), label="cap-band")]

        def chart(U: np.ndarray, R=R, c_eps=c_eps, i=i, M=M) -> np.ndarray:
            c = c_eps * U[:, 0]
            xbar = R * np.sqrt(1.0 - c * c)[:, None] * _omega_chart(U[:, 1:], M)
            return _insert_column(xbar, R * c, i - 1)

        def area(U: np.ndarray, R=R, c_eps=c_eps, M=M) -> np.ndarray:
            c = c_eps * U[:, 0]
            return R ** (M) * c_eps * (1.0 - c * c) ** ((M - 2.0) / 2.0) * _angular_area(U[:, 1:])

        return BoundaryPiece(
            label="cap-band",
            param_lo=(0.0,) * M,
            param_hi=(1.0,) + (math.pi / 2,) * (M - 1),
            chart=chart,
            area_element=area,
            cell_builder=builder,
        )

    def _base_facet(self) -> BoundaryPiece:
        N, i, R = self.N, self.axis, self.R
        M = N - 1

        def chart(U: np.ndarray, R=R, i=i, M=M) -> np.ndarray:
            u = U[:, :1]
            pts = R * u * _omega_chart(U[:, 1:], M)
            return _insert_column(pts, np.zeros(U.shape[0]), i - 1)

        return BoundaryPiece(
            label="base-facet",
            param_lo=(0.0,) * M,
            param_hi=(1.0,) + (math.pi / 2,) * (M - 1),
            chart=chart,
            area_element=lambda U, R=R, M=M: R**M
            * U[:, 0] ** (M - 1)
            * _angular_area(U[:, 1:]),
            cell_builder=lambda A, R=R, i=i: _orthant_ball_cells(
                drop_index(A, i).entries, R, label="base-facet"
            ),
            hyperplane=i,
        )

    def _side_facet(self, k: int) -> BoundaryPiece:
        """Facet on {x_k = 0}: itself a cone slab one dimension down."""
        N, i, eps, R = self.N, self.axis, self.eps, self.R
        if N == 2:
            # the slab meets {x_k = 0} only at the origin
            return BoundaryPiece(
                label=f"side-facet-x{k}",
                param_lo=(0.0,),
                param_hi=(0.0,),
                chart=lambda U: np.zeros((U.shape[0], 2)),
                area_element=lambda U: np.zeros(U.shape[0]),
                cell_builder=lambda A: [],
                hyperplane=k,
                degenerate=True,
            )
        i_f = i if i < k else i - 1

        def builder(A, k=k, i_f=i_f) -> list[ProductCell]:
            A = as_exponents(A)
            return _cone_slab_volume_cells(
                N - 1, i_f, eps, R, drop_index(A, k), label=f"side-facet-x{k}"
            )

        # parameters: (w, u, angles of the (N-2)-dim transverse directions)
        K = N - 2

        def chart(U: np.ndarray, k=k, i=i, eps=eps, R=R, K=K) -> np.ndarray:
            u = U[:, 1]
            xbar_ik = R * u[:, None] * _omega_chart(U[:, 2:], K)
            cap = np.minimum(eps * R * u, R * np.sqrt(np.maximum(1.0 - u * u, 0.0)))
            x_i = U[:, 0] * cap
            lowered = _insert_column(xbar_ik, x_i, i - 1 if i < k else i - 2)
            # positions: removing x_k leaves the slab coordinates; insert
            # x_i at its place among them, then restore x_k = 0
            return _insert_column(lowered, np.zeros(U.shape[0]), k - 1)

        def area(U: np.ndarray, eps=eps, R=R, K=K) -> np.ndarray:
            u = U[:, 1]
            cap = np.minimum(eps * R * u, R * np.sqrt(np.maximum(1.0 - u * u, 0.0)))
            return cap * R**K * u ** (K - 1) * _angular_area(U[:, 2:])

        return BoundaryPiece(
            label=f"side-facet-x{k}",
            param_lo=(0.0,) * (N - 1),
            param_hi=(1.0, 1.0) + (math.pi / 2,) * (K - 1),
            chart=chart,
            area_element=area,
            cell_builder=builder,
            hyperplane=k,
        )

    def contains(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        i0 = self.axis - 1
        inside = np.all(x > 0.0, axis=-1)
        inside &= np.sum(x * x, axis=-1) < self.R**2
        trans = np.sqrt(np.sum(x * x, axis=-1) - x[..., i0] ** 2)
        return inside & (x[..., i0] < self.eps * trans)

    def bounding_box(self):
        lo = np.zeros(self.N)
        hi = np.full(self.N, self.R)
        hi[self.axis - 1] = self._c_eps * self.R
        return lo, hi

    def dilate(self, lam: float) -> "ConeSlab":
        return replace(self, R=lam * self.R)

    def describe(self) -> dict:
        return {
            "family": "cone-slab",
            "dim": self.N,
            "axis": self.axis,
            "eps": self.eps,
            "R": self.R,
        }


# ---------------------------------------------------------------------------
# module-level operations


def boundary_pieces(shape: ShapeFamily) -> list[BoundaryPiece]:
    """The shape's boundary decomposition (labelled charts plus cells)."""
    return shape.boundary_pieces()


def dilate(shape: ShapeFamily, lam: float) -> ShapeFamily:
    """Scale the shape by lam > 0 about the origin."""
    if not (lam > 0):
        raise ValueError(f"dilation factor must be positive, got {lam}")
    return shape.dilate(lam)


def closed_form_orthant_ball_mass(A, R: float = 1.0) -> float:
    """Gamma closed form of int over B_R(0) cap positive orthant of x^A dx.

    Equals R^(N+a) prod Gamma((a_i+1)/2) / (2^N Gamma(1 + (N+a)/2)).
    Multiplying by 2^(N-k) (k = number of strictly positive a_i) gives
    the mass of the ball restricted to the admissible cone of A.
    """
    A = as_exponents(A)
    N = len(A)
    a = A.total
    log_val = (N + a) * math.log(R) - N * math.log(2.0) - ln_gamma(1.0 + (N + a) / 2.0)
    for a_i in A:
        log_val += ln_gamma((a_i + 1.0) / 2.0)
    return math.exp(log_val)


def unit_orthant_ball_moment(E, radial_extra: float = 0.0, q: QuadratureSpec | None = None) -> float:
    """Quadrature value of int over B_1(0) cap orthant of x^E |x|^extra dx.

    Works in any dimension len(E) >= 1; these are the transverse
    factors appearing in the escaping-ball and slab rate bounds.
    """
    E = as_exponents(E)
    return estimate_cells(_orthant_ball_cells(E.entries, 1.0, radial_extra), q).value


def _parse_kv(tokens: list[str], kind: str) -> dict[str, str]:
    if len(tokens) % 2 != 0:
        raise ValueError(f"shape grammar for {kind!r}: flags and values must pair up")
    out = {}
    for flag, value in zip(tokens[0::2], tokens[1::2]):
        if not flag.startswith("--"):
            raise ValueError(f"expected a --flag, got {flag!r}")
        out[flag[2:]] = value
    return out


def parse_shape(spec: str | list[str], dim: int | None = None) -> ShapeFamily:
    """Build a shape from the compact CLI grammar.

    Examples: "orthant-ball --R 1", "box --lo 0,0 --hi 1,1",
    "tball --axis 1 --t 100 --r 1", "cone-slab --axis 1 --eps 1e-3 --R 1".
    `dim` supplies N for the families that do not carry it in their
    flags (taken from the weight vectors by the CLI).
    """
    tokens = spec.split() if isinstance(spec, str) else list(spec)
    if not tokens:
        raise ValueError("empty shape specification")
    kind, kv = tokens[0], _parse_kv(tokens[1:], tokens[0])
    if kind == "box":
        lo = tuple(float(v) for v in kv["lo"].split(","))
        hi = tuple(float(v) for v in kv["hi"].split(","))
        return Box(lo, hi)
    if dim is None:
        raise ValueError(f"shape kind {kind!r} needs the dimension from context")
    if kind == "orthant-ball":
        return OrthantBall(dim, float(kv.get("R", 1.0)))
    if kind == "tball":
        return TranslatedBall(dim, int(kv["axis"]), float(kv["t"]), float(kv.get("r", 1.0)))
    if kind == "cone-slab":
        return ConeSlab(dim, int(kv["axis"]), float(kv["eps"]), float(kv.get("R", 1.0)))
    raise ValueError(f"unknown shape kind {kind!r}")
