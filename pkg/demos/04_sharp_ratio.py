"""The slab ratio P_A/m_B converges to the exact constant a_i.

Under the boundary hypotheses a_j = b_j off axis i and a_i = b_i + 1
the thin cone slab makes the unnormalized ratio P_A/m_B approach a_i.
A two-point Richardson step removes the leading O(eps) error; the
breakdown table attributes the limit to the lateral cone facet, with
all other boundary pieces decaying at strictly higher order.
"""

from monoperim import SweepSchedule, boundary_term_breakdown, sharp_ratio_limit, weight_pair


def main() -> None:
    cases = [
        (weight_pair((1.0, 0.0), (0.0, 0.0)), 1),
        (weight_pair((2.0, 1.0, 0.0), (1.0, 1.0, 0.0)), 1),
    ]
    for pair, i in cases:
        res = sharp_ratio_limit(pair, i, eps=1e-3)
        print(f"A = {pair.A}, B = {pair.B}, axis {i}")
        print(f"  ratio at eps          {res.ratio_at_eps:.8f}")
        print(f"  ratio at eps/2        {res.ratio_at_half_eps:.8f}")
        print(f"  Richardson limit      {res.extrapolated:.8f}")
        print(f"  exact constant a_i    {res.constant:.8f}")
        print(f"  relative gap          {res.relative_gap:.2e}\n")

    pair, i = cases[0]
    schedule = SweepSchedule("eps", 0.02, 0.5, 5)
    info = boundary_term_breakdown(pair, i, schedule)
    print("perimeter budget by boundary piece (smallest eps of the schedule):")
    for label, exponent in sorted(info["piece_exponents"].items()):
        tag = " <- dominant" if label == info["dominant_piece"] else ""
        print(f"  {label:14s} eps-exponent {exponent:6.3f}{tag}")
    print(f"  lower-order share of the dominant piece: {info['lower_order_ratio']:.3f}")


if __name__ == "__main__":
    main()
