"""Batch command-line front end.

Subcommands: classify (existence verdict), quotient (one shape),
sweep (quotient along a geometric schedule, CSV-friendly), fit (sweep
plus log-log power-law fit), sobolev-const (closed-form constants),
and verify (named checks: lemma31, lemma32, lemma33, lemma34, thm12,
thmA, ibp).

Output is deterministic for a fixed config and seed: JSON keys are
sorted, floats use shortest round-trip repr, and every run record
embeds its fully resolved configuration.  The default adaptive
quadrature depth honors the MONOPERIM_QUAD_DEPTH environment variable.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .checks import CHECK_NAMES, run_check
from .integrate import QuadratureSpec
from .isoperimetry import classify_existence, quotient
from .limits import SweepSchedule, fit_power_law, predicted_exponent, sweep
from .shapes import ConeSlab, TranslatedBall, parse_shape
from .sobolev import best_constant, best_constant_p1
from .weight_core import weight_pair

__all__ = ["main"]


def _vector(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(tok) for tok in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected a comma-separated vector, got {text!r}") from exc


def _config(args: argparse.Namespace) -> dict:
    out = {}
    for key, value in vars(args).items():
        if key == "func":
            continue
        out[key] = list(value) if isinstance(value, tuple) else value
    return out


def _csv_cell(value) -> str:
    return repr(value) if isinstance(value, float) else str(value)


def _strip_timing(payload):
    """Drop wall-clock fields so identical runs print identical bytes."""
    if isinstance(payload, dict):
        return {
            key: _strip_timing(value)
            for key, value in payload.items()
            if key != "elapsed_s" and not key.endswith("_ms")
        }
    if isinstance(payload, list):
        return [_strip_timing(item) for item in payload]
    return payload


def _write(args: argparse.Namespace, result, rows: list[dict] | None) -> None:
    config = _config(args)
    if getattr(args, "format", "json") == "csv":
        if rows is None:
            raise ValueError("this subcommand has no tabular form; use --format json")
        lines = ["# config: " + json.dumps(config, sort_keys=True)]
        if rows:
            header = list(rows[0])
            lines.append(",".join(header))
            for row in rows:
                lines.append(",".join(_csv_cell(row[key]) for key in header))
        text = "\n".join(lines) + "\n"
    else:
        text = json.dumps({"config": config, "result": result}, sort_keys=True, indent=2) + "\n"
    if getattr(args, "out", None):
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _pair_from(args: argparse.Namespace):
    pair = weight_pair(args.A, args.B)
    if getattr(args, "N", None) is not None and args.N != pair.N:
        raise ValueError(f"--N {args.N} contradicts vectors of length {pair.N}")
    return pair


def _quad_spec(args: argparse.Namespace) -> QuadratureSpec | None:
    nodes = getattr(args, "nodes", None)
    return None if nodes is None else QuadratureSpec(nodes_per_axis=nodes)


def _cmd_classify(args: argparse.Namespace) -> int:
    verdict = classify_existence(_pair_from(args)).as_dict()
    _write(args, verdict, [verdict])
    return 0


def _cmd_quotient(args: argparse.Namespace) -> int:
    pair = _pair_from(args)
    shape = parse_shape(args.shape, dim=pair.N)
    report = quotient(shape, pair, _quad_spec(args))
    row = {
        "perimeter": report.perimeter.value,
        "volume": report.volume.value,
        "quotient": report.quotient,
        "relerr": report.combined_rel_error,
        "sigma": report.sigma,
    }
    _write(args, report.as_dict(), [row])
    return 0


def _build_sweep(args: argparse.Namespace):
    pair = _pair_from(args)
    if args.family == "tball":
        if args.t_start is None:
            raise ValueError("--t-start is required for --family tball")
        schedule = SweepSchedule("t", args.t_start, args.ratio, args.count)
        template = TranslatedBall(pair.N, args.axis, args.t_start, args.r)
    elif args.family == "cone-slab":
        if args.eps_start is None:
            raise ValueError("--eps-start is required for --family cone-slab")
        schedule = SweepSchedule("eps", args.eps_start, args.ratio, args.count)
        template = ConeSlab(pair.N, args.axis, args.eps_start, args.R)
    else:
        raise ValueError(f"unknown family {args.family!r}")
    return pair, template, schedule


def _sweep_rows(reports, schedule) -> list[dict]:
    rows = []
    for value, report in zip(schedule.values, reports):
        rows.append(
            {
                "param": value,
                "perimeter": report.perimeter.value,
                "volume": report.volume.value,
                "quotient": report.quotient,
                "relerr": report.combined_rel_error,
            }
        )
    return rows


def _cmd_sweep(args: argparse.Namespace) -> int:
    pair, template, schedule = _build_sweep(args)
    reports = sweep(template, schedule, pair, _quad_spec(args))
    rows = _sweep_rows(reports, schedule)
    _write(args, rows, rows)
    return 0


def _cmd_fit(args: argparse.Namespace) -> int:
    pair, template, schedule = _build_sweep(args)
    reports = sweep(template, schedule, pair, _quad_spec(args))
    fit = fit_power_law(reports, schedule, args.tail_fraction)
    family = TranslatedBall if args.family == "tball" else ConeSlab
    result = {
        "exponent": fit.exponent,
        "intercept": fit.intercept,
        "stderr": fit.stderr,
        "r_squared": fit.r_squared,
        "predicted_exponent": predicted_exponent(pair, args.axis, family),
    }
    _write(args, result, [result])
    return 0


def _cmd_sobolev_const(args: argparse.Namespace) -> int:
    result = {"C1": best_constant_p1(args.A)}
    if args.p is not None:
        result["p"] = args.p
        result["Cp"] = best_constant(args.p, args.A)
    _write(args, result, [result])
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    overrides = {}
    if args.A is not None or args.B is not None:
        if args.A is None or args.B is None:
            raise ValueError("--A and --B must be given together")
        overrides["pair"] = weight_pair(args.A, args.B)
    if args.i is not None:
        overrides["i"] = args.i
    if args.eps is not None:
        overrides["eps"] = args.eps
    if args.count is not None:
        overrides["count"] = args.count
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.samples is not None:
        overrides["sample_count"] = args.samples
    result = run_check(args.check, **overrides)
    payload = _strip_timing(result.as_dict())
    sys.stdout.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    return 0 if result.passed else 1


def _add_output_flags(parser: argparse.ArgumentParser, default_format: str = "json") -> None:
    parser.add_argument("--format", choices=("json", "csv"), default=default_format)
    parser.add_argument("--out", default=None, help="write output to this path instead of stdout")


def _add_pair_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--A", type=_vector, required=True, help="perimeter exponents, e.g. 1,0")
    parser.add_argument("--B", type=_vector, required=True, help="volume exponents, e.g. 0,0")
    parser.add_argument("--N", type=int, default=None, help="dimension (validated against the vectors)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="monoperim",
        description="Monomial-weight isoperimetry toolkit",
        epilog="Environment: MONOPERIM_QUAD_DEPTH overrides the default adaptive quadrature depth.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("classify", help="existence verdict for a weight pair")
    _add_pair_flags(p)
    _add_output_flags(p)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("quotient", help="P_A/m_B^sigma of one shape")
    _add_pair_flags(p)
    p.add_argument(
        "--shape",
        required=True,
        help='e.g. "orthant-ball --R 1", "box --lo 0,0 --hi 1,1", '
        '"tball --axis 1 --t 100 --r 1", "cone-slab --axis 1 --eps 1e-3 --R 1"',
    )
    p.add_argument("--nodes", type=int, default=None, help="quadrature nodes per axis")
    _add_output_flags(p)
    p.set_defaults(func=_cmd_quotient)

    for name, help_text in (("sweep", "quotients along a schedule"), ("fit", "sweep plus power-law fit")):
        p = sub.add_parser(name, help=help_text)
        _add_pair_flags(p)
        p.add_argument("--family", choices=("tball", "cone-slab"), required=True)
        p.add_argument("--axis", type=int, default=1)
        p.add_argument("--t-start", type=float, default=None, dest="t_start")
        p.add_argument("--eps-start", type=float, default=None, dest="eps_start")
        p.add_argument("--ratio", type=float, required=True)
        p.add_argument("--count", type=int, required=True)
        p.add_argument("--r", type=float, default=1.0, help="ball radius (tball)")
        p.add_argument("--R", type=float, default=1.0, help="slab radius (cone-slab)")
        p.add_argument("--nodes", type=int, default=None)
        if name == "fit":
            p.add_argument("--tail-fraction", type=float, default=1.0, dest="tail_fraction")
        _add_output_flags(p, default_format="csv" if name == "sweep" else "json")
        p.set_defaults(func=_cmd_sweep if name == "sweep" else _cmd_fit)

    p = sub.add_parser("sobolev-const", help="closed-form best constants")
    p.add_argument("--A", type=_vector, required=True)
    p.add_argument("--p", type=float, default=None, help="also evaluate C_p for this p in (1, D)")
    _add_output_flags(p)
    p.set_defaults(func=_cmd_sobolev_const)

    p = sub.add_parser("verify", help="run a named check and exit 0/1")
    p.add_argument("check", choices=sorted(CHECK_NAMES))
    p.add_argument("--A", type=_vector, default=None)
    p.add_argument("--B", type=_vector, default=None)
    p.add_argument("--N", type=int, default=None)
    p.add_argument("--i", type=int, default=None, dest="i")
    p.add_argument("--eps", type=float, default=None)
    p.add_argument("--count", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--samples", type=int, default=None)
    p.set_defaults(func=_cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
