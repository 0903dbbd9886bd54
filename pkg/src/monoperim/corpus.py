"""Fixed corpus of (shape, weight pair) cases used by the check suite.

Twenty cases across N = 2 and N = 3 covering all four shape families,
axes other than the first, boxes touching and avoiding the coordinate
hyperplanes, and weight pairs with A = B, A != B, and the
boundary-equality case a_i = b_i + 1.  Slab apertures are kept moderate
so the Monte Carlo route retains usable hit rates.
"""

from __future__ import annotations

from .shapes import Box, ConeSlab, OrthantBall, ShapeFamily, TranslatedBall
from .weight_core import WeightPair, weight_pair

__all__ = ["standard_corpus"]


def standard_corpus() -> list[tuple[ShapeFamily, WeightPair]]:
    """The twenty benchmark cases, in a fixed order."""
    return [
        (OrthantBall(2, 1.0), weight_pair((1, 1), (1, 1))),
        (OrthantBall(2, 1.0), weight_pair((0, 0), (0, 0))),
        (OrthantBall(2, 2.0), weight_pair((1, 0), (1, 0))),
        (OrthantBall(2, 1.0), weight_pair((1, 0), (0, 0))),
        (Box((0, 0), (1, 1)), weight_pair((1, 1), (1, 1))),
        (Box((0, 0), (1, 2)), weight_pair((2, 0), (1, 0))),
        (Box((0.5, 0.25), (1.5, 1.25)), weight_pair((0, 0), (0, 0))),
        (ConeSlab(2, 1, 0.4, 1.0), weight_pair((1, 0), (0, 0))),
        (ConeSlab(2, 2, 0.5, 1.0), weight_pair((1, 1), (1, 1))),
        (ConeSlab(2, 1, 0.3, 2.0), weight_pair((0, 0), (0, 0))),
        (TranslatedBall(2, 1, 5.0, 1.0), weight_pair((0, 0), (1, 0))),
        (TranslatedBall(2, 2, 6.0, 1.0), weight_pair((1, 0), (1, 0))),
        (OrthantBall(3, 1.0), weight_pair((1, 1, 1), (1, 1, 1))),
        (OrthantBall(3, 1.5), weight_pair((2, 1, 0), (1, 1, 0))),
        (Box((0, 0, 0), (1, 1, 2)), weight_pair((1, 0, 1), (1, 0, 1))),
        (Box((0.25, 0, 0.5), (1.25, 1, 1.5)), weight_pair((0, 2, 0), (0, 1, 0))),
        (ConeSlab(3, 1, 0.5, 1.0), weight_pair((1, 0, 0), (0, 0, 0))),
        (ConeSlab(3, 2, 0.4, 1.0), weight_pair((0, 1, 1), (0, 1, 1))),
        (TranslatedBall(3, 3, 6.0, 1.0), weight_pair((0, 0, 0), (0, 0, 1))),
        (TranslatedBall(3, 1, 8.0, 2.0), weight_pair((1, 1, 0), (1, 1, 0))),
    ]
