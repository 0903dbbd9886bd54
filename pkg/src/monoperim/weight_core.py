"""Exponent vectors and weight pairs for monomial weights.

A monomial weight on R^N is x^E = |x_1|^e_1 * ... * |x_N|^e_N with all
e_i >= 0.  A weight pair (A, B) carries the perimeter weight A and the
volume weight B together with the derived quantities used everywhere
else: the sums a, b, the homogeneity exponent sigma = (N+a-1)/(N+b) and
the homogeneous dimension D = N + a.

Axis indices in the public API are 1-based (i = 1 is the first
coordinate), matching the usual math convention; they are converted
to 0-based offsets internally.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "ExponentVector",
    "WeightPair",
    "as_exponents",
    "eval_weight",
    "drop_index",
    "drop_two",
    "in_admissible_cone",
]


@dataclass(frozen=True)
class ExponentVector:
    """Nonnegative monomial exponents, one entry per coordinate."""

    entries: tuple[float, ...]

    def __post_init__(self):
        ent = tuple(float(e) for e in self.entries)
        if len(ent) < 1:
            raise ValueError("exponent vector needs at least one entry")
        for e in ent:
            if not np.isfinite(e) or e < 0:
                raise ValueError(f"exponents must be finite and >= 0, got {e}")
        object.__setattr__(self, "entries", ent)

    @classmethod
    def parse(cls, text: str) -> "ExponentVector":
        """Parse a comma-separated list of decimals, e.g. "1.5,0,2"."""
        parts = [p.strip() for p in text.split(",") if p.strip() != ""]
        if not parts:
            raise ValueError(f"cannot parse exponent vector from {text!r}")
        return cls(tuple(float(p) for p in parts))

    @property
    def total(self) -> float:
        """Sum of the entries (the letter a or b in the quotient formulas)."""
        return float(sum(self.entries))

    @property
    def positive_count(self) -> int:
        """Number of strictly positive entries."""
        return sum(1 for e in self.entries if e > 0)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.entries, dtype=float)

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, idx):
        return self.entries[idx]

    def __iter__(self):
        return iter(self.entries)

    def __str__(self) -> str:
        return ",".join(repr(e) for e in self.entries)


def as_exponents(E) -> ExponentVector:
    """Coerce a string, sequence or ExponentVector to an ExponentVector."""
    if isinstance(E, ExponentVector):
        return E
    if isinstance(E, str):
        return ExponentVector.parse(E)
    return ExponentVector(tuple(E))


def eval_weight(x, E) -> np.ndarray | float:
    """Evaluate x^E = prod |x_i|^e_i at one point or a batch of points.

    Parameters
    ----------
    x : array_like, shape (N,) or (m, N)
    E : exponent vector of length N

    The convention 0^0 = 1 applies entrywise, so zero exponents never
    annihilate the weight on the coordinate hyperplanes.
    """
    E = as_exponents(E)
    pts = np.asarray(x, dtype=float)
    single = pts.ndim == 1
    if single:
        pts = pts[None, :]
    if pts.shape[1] != len(E):
        raise ValueError(f"point dimension {pts.shape[1]} != exponent length {len(E)}")
    vals = np.ones(pts.shape[0])
    for j, e in enumerate(E):
        if e != 0.0:
            vals *= np.abs(pts[:, j]) ** e
    return float(vals[0]) if single else vals


def drop_index(E, i: int) -> ExponentVector:
    """Remove entry i (1-based) from E; the transverse vector E-bar_i."""
    E = as_exponents(E)
    if not 1 <= i <= len(E):
        raise IndexError(f"index {i} out of range for length {len(E)}")
    return ExponentVector(E.entries[: i - 1] + E.entries[i:])


def drop_two(E, i: int, k: int) -> ExponentVector:
    """Remove entries i and k (1-based, distinct) from E."""
    E = as_exponents(E)
    if i == k:
        raise IndexError("drop_two needs two distinct indices")
    for idx in (i, k):
        if not 1 <= idx <= len(E):
            raise IndexError(f"index {idx} out of range for length {len(E)}")
    keep = [e for j, e in enumerate(E.entries, start=1) if j not in (i, k)]
    return ExponentVector(tuple(keep))


def in_admissible_cone(x, A) -> np.ndarray | bool:
    """True where x_i > 0 for every coordinate with a_i > 0 (strict)."""
    A = as_exponents(A)
    pts = np.asarray(x, dtype=float)
    single = pts.ndim == 1
    if single:
        pts = pts[None, :]
    if pts.shape[1] != len(A):
        raise ValueError(f"point dimension {pts.shape[1]} != exponent length {len(A)}")
    ok = np.ones(pts.shape[0], dtype=bool)
    for j, e in enumerate(A):
        if e > 0:
            ok &= pts[:, j] > 0
    return bool(ok[0]) if single else ok


@dataclass(frozen=True)
class WeightPair:
    """Perimeter weight A and volume weight B on a common R^N, N >= 2.

    Derived quantities are properties so they are always recomputed
    from the entries and can never go stale.
    """

    A: ExponentVector
    B: ExponentVector

    def __post_init__(self):
        A = as_exponents(self.A)
        B = as_exponents(self.B)
        if len(A) != len(B):
            raise ValueError(f"A and B have different lengths: {len(A)} vs {len(B)}")
        if len(A) < 2:
            raise ValueError("weight pairs live in dimension N >= 2")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)

    @property
    def N(self) -> int:
        return len(self.A)

    @property
    def a(self) -> float:
        return self.A.total

    @property
    def b(self) -> float:
        return self.B.total

    @property
    def sigma(self) -> float:
        """(N + a - 1) / (N + b), the homogeneity exponent of the quotient."""
        return (self.N + self.a - 1.0) / (self.N + self.b)

    @property
    def D(self) -> float:
        """Homogeneous dimension N + a of the perimeter weight."""
        return self.N + self.a

    @property
    def positive_count(self) -> int:
        """Number of strictly positive entries of A (the letter k)."""
        return self.A.positive_count


def weight_pair(A, B) -> WeightPair:
    """Convenience constructor accepting strings or sequences."""
    return WeightPair(as_exponents(A), as_exponents(B))
