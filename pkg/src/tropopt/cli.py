"""``tropopt`` command line: minimize, inequality, schedule, plot.

Exit codes: 0 ok, 1 bad input, 2 infeasible, 3 degenerate.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .ineq import Infeasible, solve_inequality
from .linalg import Mat
from .optimizer import Degenerate, OptProblem, OptResult, OracleConfig, brute_force_min, minimize
from .plot import render_svg
from .scheduling import schedule
from .serialize import (
    FormatError,
    dumps,
    format_number,
    parse_problem,
    parse_project,
    result_to_json,
    schedule_to_json,
)

EXIT_OK, EXIT_INPUT, EXIT_INFEASIBLE, EXIT_DEGENERATE = 0, 1, 2, 3


def exit_code(result) -> int:
    if isinstance(result, Infeasible):
        return EXIT_INFEASIBLE
    if isinstance(result, Degenerate):
        return EXIT_DEGENERATE
    return EXIT_OK


def _read_json(path: str | None):
    text = sys.stdin.read() if path in (None, "-") else Path(path).read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from exc


def _write(path: str | None, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8", newline="\n")


def _problem(args):
    return parse_problem(_read_json(args.input), args.semifield)


def cmd_minimize(args) -> int:
    prob = _problem(args)
    p = OptProblem(prob.A, prob.C, prob.g)
    result = minimize(p)
    _write(args.output, dumps(result_to_json(result)))
    if args.oracle:
        found = brute_force_min(p, config=OracleConfig(grid_radius=args.grid_radius, grid_step=args.grid_step))
        theta = format_number(result.theta.value) if isinstance(result, OptResult) else None
        oracle = None if found is None else format_number(found.value)
        print(f"theta={theta} oracle={oracle} step={args.grid_step}", file=sys.stderr)
    return exit_code(result)


def cmd_inequality(args) -> int:
    prob = _problem(args)
    b = prob.b if prob.b is not None else prob.g
    if b is None:
        b = Mat.zeros(prob.field, prob.n, 1)
    result = solve_inequality(prob.A, b)
    _write(args.output, dumps(result_to_json(result)))
    return exit_code(result)


def cmd_schedule(args) -> int:
    spec = parse_project(_read_json(args.input))
    result = schedule(spec)
    _write(args.output, dumps(schedule_to_json(result)))
    return exit_code(result)


def cmd_plot(args) -> int:
    prob = _problem(args)
    if prob.n != 2:
        raise FormatError(f"plot needs a 2-dimensional problem, got n = {prob.n}")
    if prob.field.value != "max-plus":
        raise FormatError("plot supports the max-plus semifield only")
    result = minimize(OptProblem(prob.A, prob.C, prob.g))
    _write(args.output, render_svg(prob, result))
    return exit_code(result)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tropopt", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--input", "-i", default="-", help="input JSON file (default: stdin)")
        p.add_argument("--output", "-o", default="-", help="output file (default: stdout)")

    for name, func, help_ in (
        ("minimize", cmd_minimize, "minimise x^- A x subject to C x <= x, g <= x"),
        ("inequality", cmd_inequality, "solve A x + b <= x"),
        ("plot", cmd_plot, "render a 2-D max-plus problem as SVG"),
    ):
        p = sub.add_parser(name, help=help_)
        common(p)
        p.add_argument("--semifield", help="override the file's semifield tag")
        p.set_defaults(func=func)
        if name == "minimize":
            p.add_argument("--oracle", action="store_true", help="also run the brute-force grid search")
            p.add_argument("--grid-radius", type=float, default=30.0)
            p.add_argument("--grid-step", type=float, default=0.25)

    p = sub.add_parser("schedule", help="minimum-flow-time project schedule")
    common(p)
    p.set_defaults(func=cmd_schedule)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (FormatError, ValueError, OSError) as exc:
        print(f"tropopt {args.command}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
