"""
VI TOOLKIT RUNNER
Solve, check and reproduce inverted variational inequality instances

Usage:
    vi solve data/instances/ex432_iS.json
    vi check data/instances/ex432_iS.json --property ql
    vi fixed-point data/instances/brouwer_1d.json
    vi reproduce ex434
    vi export-gap-field data/instances/ex432_iS.json -o gap.csv
    vi canonicalize data/instances/ex432_iS.json

Exit codes: 0 success or pass, 2 negative outcome, 1 error.
"""

import argparse
import json
import sys
import time
from pathlib import Path
from typing import Any, Dict, List, Optional

from src import __version__
from src.errors import VIToolkitError
from src.cli.commands import (
    EXAMPLES,
    PROPERTIES,
    Overrides,
    cmd_canonicalize,
    cmd_check,
    cmd_export_gap_field,
    cmd_fixed_point,
    cmd_reproduce,
    cmd_solve,
)
from src.cli.report import EXIT_ERROR, EXIT_NEGATIVE, EXIT_OK, error_report
from utils.structured_logger import configure


# Colors for stderr output
class Colors:
    HEADER = '\033[95m'
    OKBLUE = '\033[94m'
    OKCYAN = '\033[96m'
    OKGREEN = '\033[92m'
    WARNING = '\033[93m'
    FAIL = '\033[91m'
    ENDC = '\033[0m'
    BOLD = '\033[1m'


def _err(text):
    print(text, file=sys.stderr)


def print_success(text):
    _err(f"{Colors.OKGREEN}[OK] {text}{Colors.ENDC}")


def print_negative(text):
    _err(f"{Colors.WARNING}[NEGATIVE] {text}{Colors.ENDC}")


def print_error(text):
    _err(f"{Colors.FAIL}[ERROR] {text}{Colors.ENDC}")


def print_info(text):
    _err(f"{Colors.OKCYAN}>> {text}{Colors.ENDC}")


def parse_param(text: str) -> tuple:
    """key=value with value read as JSON when possible"""
    if "=" not in text:
        raise argparse.ArgumentTypeError(f"expected key=value, got '{text}'")
    key, raw = text.split("=", 1)
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return key.strip(), value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, help="Seed for sampled checks")
    common.add_argument("--resolution", type=int, help="Grid points per axis")
    common.add_argument("--tol", type=float, help="Solution / check tolerance")
    common.add_argument("--out", help="Write the report here instead of stdout")
    common.add_argument("--timing", action="store_true", help="Record wall time in the report")
    common.add_argument("--log-level", help="Structured log level (stderr)")

    parser = argparse.ArgumentParser(
        prog="vi",
        description="Grid solver and falsifiers for inverted variational inequalities",
        parents=[common],
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", parents=[common], help="Grid-solve an instance")
    solve.add_argument("file")

    check = sub.add_parser("check", parents=[common], help="Run a property checker")
    check.add_argument("file")
    check.add_argument("--property", required=True, help=f"One of: {', '.join(sorted(PROPERTIES))}")
    check.add_argument("--param", action="append", type=parse_param, default=[],
                       metavar="KEY=VALUE", help="Checker parameter (repeatable)")

    fixed = sub.add_parser("fixed-point", parents=[common], help="Fixed point of the instance's F")
    fixed.add_argument("file")

    reproduce = sub.add_parser("reproduce", parents=[common], help="Re-run a bundled example")
    reproduce.add_argument("example", help=f"One of: {', '.join(sorted(EXAMPLES))}")

    export = sub.add_parser("export-gap-field", parents=[common], help="Write the grid gap field as CSV")
    export.add_argument("file")
    export.add_argument("-o", "--output", required=True, help="CSV path")

    canonical = sub.add_parser("canonicalize", parents=[common], help="Print the canonical instance file")
    canonical.add_argument("file")
    return parser


def _run(args: argparse.Namespace, overrides: Overrides):
    if args.command == "solve":
        return cmd_solve(args.file, overrides)
    if args.command == "check":
        return cmd_check(args.file, args.property, dict(args.param), overrides)
    if args.command == "fixed-point":
        return cmd_fixed_point(args.file, overrides)
    if args.command == "reproduce":
        return cmd_reproduce(args.example, overrides)
    return cmd_export_gap_field(args.file, args.output, overrides)


def _emit(text: str, out: Optional[str]):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _echo(args: argparse.Namespace) -> Dict[str, Any]:
    return {"name": args.command, "seed": args.seed, "resolution": args.resolution, "tol": args.tol}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.log_level:
        configure(args.log_level)
    overrides = Overrides(seed=args.seed, resolution=args.resolution, tol=args.tol)

    started = time.perf_counter()
    try:
        if args.command == "canonicalize":
            _emit(cmd_canonicalize(args.file), args.out)
            print_success("Canonical instance written")
            return EXIT_OK
        report = _run(args, overrides)
    except (VIToolkitError, OSError) as exc:
        print_error(str(exc))
        report = error_report(_echo(args), exc)
    except Exception as exc:
        print_error(f"Unexpected error: {exc}")
        report = error_report(_echo(args), exc)

    if args.timing:
        report = report.model_copy(update={"wall_time_seconds": time.perf_counter() - started})
    try:
        _emit(report.to_json(), args.out)
    except OSError as exc:
        print_error(f"Cannot write report: {exc}")
        return EXIT_ERROR

    if report.exit_code == EXIT_OK:
        print_success(f"{args.command} finished")
    elif report.exit_code == EXIT_NEGATIVE:
        print_negative(f"{args.command} finished with a negative outcome")
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
