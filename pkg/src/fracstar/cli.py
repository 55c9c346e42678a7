"""Command-line front end.

::

    fracstar <command> --problem <path> [--format json|csv]
             [--grid-n N] [--grid-grading G] [--sweep key:lo:hi:count]

Commands: ``validate``, ``solve``, ``verify``, ``sweep``, ``demo-symmetric``.
Data goes to stdout, diagnostics to stderr. Exit codes: 0 success,
2 validation errors, 3 solver failure, 4 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import dataclass

import numpy as np

from fracstar.errors import DomainError, ParseError
from fracstar.frac_ops import GridSpec
from fracstar.problem_file import emit_problem_file, parse_problem_file, read_problem_file
from fracstar.workflows import (
    EXIT_INVALID,
    Outcome,
    parse_sweep,
    run_demo_symmetric,
    run_solve,
    run_sweep,
    run_validate,
    run_verify,
)

__all__ = ["COMMANDS", "RunConfig", "emit_problem_file", "execute", "main", "parse_problem_file", "render"]

COMMANDS = ("validate", "solve", "verify", "sweep", "demo-symmetric")


@dataclass(frozen=True)
class RunConfig:
    command: str
    problem_path: str | None = None
    output_format: str = "json"
    grid: GridSpec | None = None
    sweep: tuple[str, float, float, int] | None = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if self.output_format not in ("json", "csv"):
            raise ValueError(f"unknown format {self.output_format!r}")
        if self.command != "demo-symmetric" and self.problem_path is None:
            raise ValueError(f"{self.command} needs --problem")
        if (self.sweep is not None) != (self.command == "sweep"):
            raise ValueError("--sweep is required for, and only valid with, the sweep command")


def _fmt_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def render(outcome: Outcome, output_format: str) -> str:
    if output_format == "json":
        return json.dumps(outcome.document, indent=2, allow_nan=False) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for i, (header, rows) in enumerate(outcome.tables):
        if i:
            buf.write("\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt_cell(v) for v in row])
    return buf.getvalue()


def execute(config: RunConfig) -> Outcome:
    if config.command == "demo-symmetric":
        return run_demo_symmetric(config.grid)
    try:
        problem = read_problem_file(config.problem_path)
    except (OSError, ParseError) as exc:
        return Outcome(EXIT_INVALID, {"command": config.command, "error": str(exc)}, diagnostics=[f"{type(exc).__name__}: {exc}"])

    if config.command == "validate":
        return run_validate(problem)
    if config.command == "solve":
        return run_solve(problem)
    if config.command == "verify":
        return run_verify(problem, config.grid)
    key, lo, hi, count = config.sweep
    return run_sweep(problem, key, lo, hi, count)


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fracstar",
        description="Power-law solutions of fractional equations on metric star graphs.",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--problem", help="problem file")
    parser.add_argument("--format", dest="output_format", choices=("json", "csv"), default="json")
    parser.add_argument("--grid-n", type=int, default=None, help="GL/quadrature sample count (default 4096)")
    parser.add_argument("--grid-grading", type=float, default=None, help="mesh grading exponent (default 2)")
    parser.add_argument("--sweep", default=None, help="key:lo:hi:count, key = alpha or <field>.<bond>")
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(stream=sys.stderr, level=logging.WARNING, format="%(levelname)s: %(message)s")
    parser = _parser()
    args = parser.parse_args(argv)
    try:
        grid = None
        if args.grid_n is not None or args.grid_grading is not None:
            default = GridSpec()
            grid = GridSpec(
                n=default.n if args.grid_n is None else args.grid_n,
                grading=default.grading if args.grid_grading is None else args.grid_grading,
            )
        sweep = parse_sweep(args.sweep) if args.sweep is not None else None
        config = RunConfig(args.command, args.problem, args.output_format, grid, sweep)
    except (ValueError, DomainError) as exc:
        parser.print_usage(sys.stderr)
        print(f"fracstar: error: {exc}", file=sys.stderr)
        return EXIT_INVALID

    outcome = execute(config)
    for line in outcome.diagnostics:
        print(line, file=sys.stderr)
    sys.stdout.write(render(outcome, config.output_format))
    return outcome.exit_code


if __name__ == "__main__":
    sys.exit(main())
