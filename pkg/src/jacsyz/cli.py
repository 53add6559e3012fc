"""Command-line front end: ``jacsyz --input arrangement.json``."""

from __future__ import annotations

import argparse
import sys

from .field import field_from_descriptor
from .oracle import DEFAULT_CELL_BUDGET
from .polyring import ParseError
from .report import EXIT_USAGE, MODES, ORACLES, RunConfig, UsageError, emit_report, run


def _field(text: str) -> str:
    try:
        return field_from_descriptor(text).descriptor
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _positive(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return value


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="jacsyz",
        description="Verify closed-form Jacobian syzygies of a curve arrangement against exact computation.",
    )
    p.add_argument("--input", help="arrangement JSON {variables, characteristic, factors}")
    p.add_argument("--field", type=_field, help="q (rationals) or p:<prime>; default from the input file")
    p.add_argument("--mode", choices=MODES, default="verify")
    p.add_argument("--oracle", choices=ORACLES, default="both", help="which route computes D_0(f)")
    p.add_argument("--no-normalize", action="store_true", help="keep the input coordinates")
    p.add_argument("--json", action="store_true", help="print the JSON report")
    p.add_argument("--degree-cap", type=_positive, help="top degree for the linear-algebra oracle")
    p.add_argument("--cell-budget", type=_positive, default=DEFAULT_CELL_BUDGET, help="max matrix cells per degree")
    p.add_argument("--full-check", action="store_true", help="check all subset intersections in four variables")
    p.add_argument("--m", type=int, dest="surface_m", help="surface experiment: number of components")
    p.add_argument("--p", type=int, dest="surface_p", help="surface experiment: degree of each component")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else 0
    config = RunConfig(
        input_path=args.input,
        field=args.field,
        mode=args.mode,
        oracle=args.oracle,
        normalize=not args.no_normalize,
        output="json" if args.json else "text",
        degree_cap=args.degree_cap,
        cell_budget=args.cell_budget,
        full_check=args.full_check,
        surface_m=args.surface_m,
        surface_p=args.surface_p,
    )
    try:
        result = run(config)
    except (UsageError, ParseError, ValueError) as exc:
        print(f"jacsyz: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.buffer.write(emit_report(result, config.output))
    sys.stdout.flush()
    return result.status


if __name__ == "__main__":
    sys.exit(main())
