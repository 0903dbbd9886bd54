"""From sets to functions: mollified indicators and the function quotient.

Smoothing the indicator of a set with a bump of width eps turns the
set quotient into a function quotient with an O(eps) gap, which is how
the geometric and functional forms of the inequality tie together.
The coarea chain certifies the function-side lower bound level by
level, and the 1-D profile inequality is sharp on the tent function.
"""

import numpy as np

from monoperim import (
    MollifierSpec,
    OrthantBall,
    coarea_chain_report,
    functional_quotient,
    ibp_inequality_check,
    mollified_indicator,
    quotient,
    weight_pair,
)


def main() -> None:
    shape = OrthantBall(2, 1.0)
    pair = weight_pair((1.0, 1.0), (1.0, 1.0))
    set_value = quotient(shape, pair).quotient
    print(f"set quotient of the quarter disk: {set_value:.6f}")
    for eps, h in ((0.1, 0.02), (0.05, 0.01), (0.025, 0.005)):
        pad = 2.0 * eps
        u = mollified_indicator(
            shape, MollifierSpec(eps), (-pad, -pad), (1.0 + 3.0 * pad, 1.0 + 3.0 * pad), h
        )
        q = functional_quotient(u, pair)
        print(f"  eps = {eps:5.3f}: function quotient = {q:.6f}  (gap {q - set_value:+.4f})")

    u = mollified_indicator(shape, MollifierSpec(0.025), (-0.15, -0.15), (1.2, 1.2), 0.005)
    rep = coarea_chain_report(u, weight_pair((0.0, 0.0), (0.0, 0.0)), level_count=16)
    print(
        f"\ncoarea chain on the mollified indicator: holds = {rep['holds']} "
        f"(lhs {rep['lhs']:.4f} >= {rep['rhs']:.4f}, {rep['levels_used']} levels)"
    )

    y = np.linspace(-2.0, 2.0, 4001)
    tent = np.clip(1.0 - np.abs(y), 0.0, None)
    lhs, rhs, holds = ibp_inequality_check(y, tent, 1.0, 0.0)
    print(f"\n1-D profile inequality on the tent: lhs = {lhs:.10f}, rhs = {rhs:.10f}, holds = {holds}")
    print("equality is attained: the tent is the extremal profile for a_i = 1")


if __name__ == "__main__":
    main()
