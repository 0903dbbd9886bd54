"""Extremal families that drive the isoperimetric quotient to zero.

When the existence condition fails on the lower side, balls escaping to
infinity along the offending axis kill the quotient at the rate
t^(a_i - sigma b_i); on the upper side, thin cone slabs collapse at
eps^(a_i - sigma (b_i + 1)).  Both rates come out of a log-log fit over
a geometric parameter sweep and land on the predicted exponents.
"""

from monoperim import (
    ConeSlab,
    SweepSchedule,
    TranslatedBall,
    fit_power_law,
    predicted_exponent,
    sweep,
    weight_pair,
)


def show(label, family, template, schedule, pair, tail_fraction=1.0):
    reports = sweep(template, schedule, pair)
    fit = fit_power_law(reports, schedule, tail_fraction)
    target = predicted_exponent(pair, 1, family)
    print(f"{label}")
    print(f"  {schedule.parameter_name:>10s} {'quotient':>12s}")
    for value, rep in zip(schedule.values, reports):
        print(f"  {value:10.4g} {rep.quotient:12.6g}")
    print(f"  fitted exponent   {fit.exponent:+.4f}  (stderr {fit.stderr:.1e}, R^2 {fit.r_squared:.6f})")
    print(f"  predicted         {target:+.4f}\n")


def main() -> None:
    pair = weight_pair((0.0, 0.0), (1.0, 0.0))  # lower-side violation at i=1
    schedule = SweepSchedule("t", 10.0, 4.0, 6)
    show("escaping balls, A=(0,0), B=(1,0):", TranslatedBall,
         TranslatedBall(2, 1, schedule.start, 1.0), schedule, pair)

    pair = weight_pair((2.0, 0.0), (0.0, 0.0))  # upper-side violation at i=1
    schedule = SweepSchedule("eps", 0.1, 0.25, 6)
    show("collapsing cone slabs, A=(2,0), B=(0,0):", ConeSlab,
         ConeSlab(2, 1, schedule.start, 1.0), schedule, pair, tail_fraction=0.5)


if __name__ == "__main__":
    main()
