"""Command-line front end: ``sharpbound <command> [--input FILE] [flags]``.

Reads one JSON job from --input (default stdin) and prints one JSON result on
stdout. Exit codes: 0 success, 1 violation found in a guaranteed region,
2 input or domain error.
"""

import argparse
import json
import logging
import sys
from collections.abc import Sequence
from typing import IO, Any

from config import LOG_LEVEL
from models import Command, JobOptions, JobSpec
from services.jobs import error_kind, run_job

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_ERROR = 2

COMMAND_HELP = {
    Command.LAMBDA: "sharp constant, Q-weights and extremal point",
    Command.CHECK: "evaluate one inequality instance (case auto-classified)",
    Command.REFINE: "superquadratic refinement of the sharp bound",
    Command.IDENTITY: "two-term Euler-Lagrange identity",
    Command.BOHR: "Bohr parameter pack and chain check",
    Command.FUZZ: "seeded fuzz campaign",
    Command.SHARPNESS: "brute-force sharpness search",
}


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message)


def parse_args(argv: Sequence[str] | None = None) -> argparse.Namespace:
    common = _Parser(add_help=False)
    common.add_argument("--input", metavar="FILE", help="job JSON file (default: stdin)")
    common.add_argument("--seed", type=int, help="campaign seed")
    common.add_argument("--trials", type=int, help="campaign trials / search restarts")
    common.add_argument("--tol", type=float, help="relative verdict tolerance")
    common.add_argument("--case", help="force the sign case (check) or pick the campaign (fuzz)")
    common.add_argument("--pretty", action="store_true", help="indent the JSON output")

    parser = _Parser(prog="sharpbound", description="Sharp constants and refinements for weighted power sums")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for command in Command:
        subparsers.add_parser(command.value, parents=[common], help=COMMAND_HELP[command])
    return parser.parse_args(argv)


def _read_payload(path: str | None, stdin: IO[str]) -> dict[str, Any]:
    if path:
        with open(path, "r") as f:
            text = f.read()
    else:
        text = stdin.read()
    return json.loads(text) if text.strip() else {}


def _emit(payload: dict[str, Any], stdout: IO[str], pretty: bool) -> None:
    stdout.write(json.dumps(payload, indent=2 if pretty else None))
    stdout.write("\n")


def run(
    argv: Sequence[str] | None = None,
    stdin: IO[str] | None = None,
    stdout: IO[str] | None = None,
) -> int:
    """Run one job and return the process exit code."""
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    pretty = False

    try:
        args = parse_args(argv)
        pretty = args.pretty
        payload = _read_payload(args.input, stdin)
        job = JobSpec.build(args.command, payload)
        options = JobOptions(seed=args.seed, trials=args.trials, tolerance=args.tol, case=args.case)
        result = run_job(job, options)
    except Exception as e:
        kind = "usage" if isinstance(e, UsageError) else error_kind(e)
        if kind is None:
            raise
        logger.error("sharpbound failed (%s): %s", kind, e)
        _emit({"error": {"kind": kind, "detail": str(e)}}, stdout, pretty)
        return EXIT_ERROR

    _emit(result.payload, stdout, pretty)
    return EXIT_VIOLATION if result.violation else EXIT_OK


def main() -> None:
    logging.basicConfig(
        level=LOG_LEVEL,
        format="%(asctime)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
    )
    sys.exit(run())


if __name__ == "__main__":
    main()
