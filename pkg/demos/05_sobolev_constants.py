"""Closed-form best constants for the weighted Sobolev inequalities.

At p = 1 the best constant coincides with the isoperimetric ball
constant, realized by the orthant ball when every exponent is positive.
For 1 < p < D the constant follows a Gamma-function formula in the
homogeneous dimension D = N + a; it blows up as p approaches D.
"""

import math

from monoperim import OrthantBall, ball_constant, best_constant, best_constant_p1, quotient


def main() -> None:
    vectors = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (2.0, 3.0), (0.5, 1.5, 0.0)]
    print(f"{'A':18s} {'C_1(A)':>12s} {'ball const':>12s} {'rel gap':>9s}")
    for A in vectors:
        c1 = best_constant_p1(A)
        bc = ball_constant(A)
        print(f"{str(A):18s} {c1:12.8f} {bc:12.8f} {abs(c1 - bc) / bc:9.1e}")

    A = (1.0, 1.0)
    rep = quotient(OrthantBall(2, 1.0), (A, A))
    print(f"\nquarter disk attains it for A = B = {A}:")
    print(f"  quotient = {rep.quotient:.12f}, C_1 = {best_constant_p1(A):.12f}")

    A = (0.0, 0.0, 0.0)
    print(f"\nC_p for A = {A} (D = 3); exact C_2 = 4/sqrt(3) = {4 / math.sqrt(3):.12f}:")
    for p in (1.2, 1.5, 2.0, 2.5, 2.9, 2.99):
        print(f"  p = {p:4.2f}  C_p = {best_constant(p, A):12.6f}")


if __name__ == "__main__":
    main()
