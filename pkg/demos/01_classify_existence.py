"""Decide whether the mixed-weight isoperimetric constant is positive.

For perimeter weight x^A and volume weight x^B the constant
C = inf P_A / m_B^sigma is positive exactly when every index i
satisfies 0 <= a_i - sigma b_i <= sigma.  The classifier reports the
verdict, the first violating index, and which side failed; this script
walks the canonical four-row table and then confirms that the global
and per-index forms of the condition agree on random weight pairs.
"""

import numpy as np

from monoperim import classify_existence, conditions_equivalent, weight_pair


def main() -> None:
    table = [
        ((1, 0), (0, 0)),
        ((0, 0), (1, 0)),
        ((2, 0), (0, 0)),
        ((1, 1), (0, 0)),
    ]
    print("A        B        status        witness  side   sigma")
    for A, B in table:
        v = classify_existence(weight_pair(A, B))
        print(
            f"{str(A):8s} {str(B):8s} {v.status:13s} "
            f"{str(v.witness_index):8s} {str(v.violated_side):6s} {v.sigma:.4f}"
        )

    rng = np.random.default_rng(0)
    draws = 2000
    mismatches = sum(
        not conditions_equivalent(
            weight_pair(
                tuple(rng.uniform(0, 4, (N := int(rng.integers(2, 5))))),
                tuple(rng.uniform(0, 4, N)),
            )
        )
        for _ in range(draws)
    )
    print(f"\nglobal vs per-index condition: {draws} random pairs, {mismatches} mismatches")


if __name__ == "__main__":
    main()
