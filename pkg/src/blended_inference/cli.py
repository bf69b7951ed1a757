"""Command-line interface.

Subcommands::

    point   blended null probability for one p-value
    table   CSV grid of calibrations over p-values and prior bounds
    ttest   two-sided t-test p-value, then the point record
    game    check the projection against a brute-force solve of the maximin game

Exit status: 0 success, 1 I/O failure, 2 domain or input error,
3 infeasible constraint set, 4 game check failed.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

import numpy as np

from .confidence import LocationModel, two_sided_p
from .exceptions import DomainError, InfeasibleError, ValidationError
from .projection import i_projection, load_problem, maximin_bruteforce
from .testing import TABLE_COLUMNS, TestInput, blend_table, blended_null_probability

EXIT_OK, EXIT_IO, EXIT_DOMAIN, EXIT_INFEASIBLE, EXIT_CHECK_FAILED = 0, 1, 2, 3, 4

#: Tolerance multiplier on grid_step for the game check.
GAME_TOLERANCE_FACTOR = 5.0

DEFAULT_PI0 = tuple(k / 20 for k in range(21))


def fmt(x) -> str:
    if isinstance(x, str):
        return x
    return format(float(x), ".10g")


def _float_in(lo, hi, lo_open=False, hi_open=False):
    def parse(text):
        try:
            x = float(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
        ok = (lo < x if lo_open else lo <= x) and (x < hi if hi_open else x <= hi)
        if not ok:
            lb, rb = "(" if lo_open else "[", ")" if hi_open else "]"
            raise argparse.ArgumentTypeError(f"{text} not in {lb}{lo}, {hi}{rb}")
        return x

    return parse


def _positive_float(text):
    return _float_in(0.0, float("inf"), lo_open=True, hi_open=True)(text)


def _finite_float(text):
    return _float_in(float("-inf"), float("inf"), lo_open=True, hi_open=True)(text)


def _positive_int(text):
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {n}")
    return n


_p_value = _float_in(0.0, 1.0, lo_open=True)
_unit = _float_in(0.0, 1.0)


def point_record(p: float, pi0_lower: float) -> dict:
    res = blended_null_probability(TestInput(p, pi0_lower))
    return {
        "p": p,
        "pi0_lower": pi0_lower,
        "sellke": res.bayes_factor_lower,
        "lfdr_lower": res.lfdr_lower,
        "blended": res.blended_null_prob,
        "maxent": (1.0 + res.lfdr_lower) / 2.0,
        "regime": res.regime.value,
    }


def ttest_record(estimate: float, std_error: float, df: float, pi0_lower: float) -> dict:
    model = LocationModel(estimate, std_error, df)
    p = two_sided_p(model)
    record = {"estimate": estimate, "std_error": std_error, "df": df, "t_ratio": model.t_ratio}
    record.update(point_record(p, pi0_lower))
    return record


def game_record(problem_path: str, grid_step: float) -> dict:
    cset, benchmark = load_problem(problem_path)
    proj = i_projection(cset, benchmark)
    game = maximin_bruteforce(cset, benchmark, grid_step)
    divergence = float(proj.divergence_to_benchmark)
    discrepancy = abs(game.value - divergence)
    tolerance = GAME_TOLERANCE_FACTOR * grid_step
    record = {}
    for atom, x in zip(benchmark.atoms, proj.projection.probs):
        record[f"projection.{atom}"] = x
    record["divergence"] = divergence
    record["game_value"] = game.value
    for atom, x in zip(benchmark.atoms, game.statistician.probs):
        record[f"statistician.{atom}"] = x
    for atom, x in zip(benchmark.atoms, game.worst_case_nature.probs):
        record[f"nature.{atom}"] = x
    record["grid_step"] = grid_step
    record["discrepancy"] = discrepancy
    record["tolerance"] = tolerance
    record["status"] = "pass" if discrepancy <= tolerance else "fail"
    return record


def render(record: dict, output_format: str) -> str:
    if output_format == "json":
        doc = {k: v if isinstance(v, str) else float(fmt(v)) for k, v in record.items()}
        return json.dumps(doc) + "\n"
    return "".join(f"{k}={fmt(v)}\n" for k, v in record.items())


def p_grid(p_min: float, p_max: float, p_steps: int) -> list[float]:
    grid = np.linspace(p_min, p_max, p_steps + 1)
    return [float(x) for x in grid]


def write_table(rows, stream) -> None:
    stream.write(",".join(TABLE_COLUMNS) + "\n")
    for row in rows:
        stream.write(",".join(fmt(x) for x in row) + "\n")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="blended-inference",
        description="Blended Bayesian/frequentist posterior probabilities.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    pt = sub.add_parser("point", help="blended null probability for one p-value")
    pt.add_argument("--p", type=_p_value, required=True, help="p-value in (0, 1]")
    pt.add_argument("--pi0-lower", type=_unit, required=True, help="lower bound on prior null probability")
    pt.add_argument("--format", choices=("text", "json"), default="text")

    tb = sub.add_parser("table", help="CSV table of calibrations")
    tb.add_argument("--p-min", type=_p_value, default=0.005)
    tb.add_argument("--p-max", type=_p_value, default=1.0)
    tb.add_argument("--p-steps", type=_positive_int, default=200)
    tb.add_argument("--pi0", type=_unit, nargs="+", default=list(DEFAULT_PI0), metavar="PI0")
    tb.add_argument("--out", default="-", help="output path, '-' for stdout")

    tt = sub.add_parser("ttest", help="two-sided t-test then blend")
    tt.add_argument("--estimate", type=_finite_float, required=True)
    tt.add_argument("--std-error", type=_positive_float, required=True)
    tt.add_argument("--df", type=_positive_float, required=True)
    tt.add_argument("--pi0-lower", type=_unit, required=True)
    tt.add_argument("--format", choices=("text", "json"), default="text")

    gm = sub.add_parser("game", help="verify projection against brute-force game")
    gm.add_argument("--problem", required=True, help="JSON problem file")
    gm.add_argument("--grid-step", type=_float_in(1e-5, 1e-1), default=1e-3)
    gm.add_argument("--format", choices=("text", "json"), default="text")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = sys.stdout
    try:
        if args.command == "point":
            out.write(render(point_record(args.p, args.pi0_lower), args.format))
        elif args.command == "ttest":
            rec = ttest_record(args.estimate, args.std_error, args.df, args.pi0_lower)
            out.write(render(rec, args.format))
        elif args.command == "table":
            if args.p_min > args.p_max:
                parser.error("--p-min must not exceed --p-max")
            rows = blend_table(p_grid(args.p_min, args.p_max, args.p_steps), args.pi0)
            if args.out == "-":
                write_table(rows, out)
            else:
                with open(args.out, "w", encoding="utf-8", newline="") as fh:
                    write_table(rows, fh)
        elif args.command == "game":
            rec = game_record(args.problem, args.grid_step)
            out.write(render(rec, args.format))
            if rec["status"] != "pass":
                return EXIT_CHECK_FAILED
    except InfeasibleError as exc:
        print(f"blended-inference: infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (DomainError, ValidationError) as exc:
        print(f"blended-inference: error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"blended-inference: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
