"""Gamma function via the Lanczos approximation (g = 7, 9 terms).

Self-contained so the closed-form constants downstream do not depend on
how a particular libm implements gamma.  Relative accuracy is around
1e-14 on the argument ranges that occur here (positive reals below a
few hundred); the test suite pins 1e-12 against the C library.
"""

from __future__ import annotations

import math

__all__ = ["gamma_fn", "ln_gamma"]

_LANCZOS_G = 7.0
_LANCZOS_C = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def gamma_fn(z: float) -> float:
    """Gamma(z) for real z, poles at the nonpositive integers."""
    z = float(z)
    if z <= 0.0 and z == math.floor(z):
        raise ValueError(f"gamma pole at z = {z}")
    if z < 0.5:
        # reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
        return math.pi / (math.sin(math.pi * z) * gamma_fn(1.0 - z))
    z -= 1.0
    acc = _LANCZOS_C[0]
    for i, c in enumerate(_LANCZOS_C[1:], start=1):
        acc += c / (z + i)
    t = z + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (z + 0.5) * math.exp(-t) * acc


def ln_gamma(z: float) -> float:
    """log Gamma(z) for z > 0, written to avoid overflow of Gamma itself."""
    z = float(z)
    if z <= 0.0:
        raise ValueError(f"ln_gamma needs z > 0, got {z}")
    if z < 0.5:
        return math.log(math.pi / math.sin(math.pi * z)) - ln_gamma(1.0 - z)
    zm = z - 1.0
    acc = _LANCZOS_C[0]
    for i, c in enumerate(_LANCZOS_C[1:], start=1):
        acc += c / (zm + i)
    t = zm + _LANCZOS_G + 0.5
    return 0.5 * math.log(2.0 * math.pi) + (zm + 0.5) * math.log(t) - t + math.log(acc)
