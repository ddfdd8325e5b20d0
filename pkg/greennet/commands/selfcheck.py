import argparse
import logging

from greennet.errors import EXIT_OK, VerificationError
from greennet.selfcheck import run_selfcheck

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("selfcheck", help="run the invariant suite")
    parser.add_argument("--seed", type=int, default=0, help="seed of the first random case")
    parser.add_argument("--cases", type=int, default=20, help="number of random cases")
    parser.add_argument("--tol-scale", type=float, default=1.0, help="multiply every tolerance (0 forces failures)")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    logger.info(f"Running selfcheck: seed={args.seed}, cases={args.cases}, tol-scale={args.tol_scale}")
    report = run_selfcheck(seed=args.seed, cases=args.cases, tol_scale=args.tol_scale)
    for finding in report.findings:
        print(f"finding: {finding}")
    print(f"{len(report.checks)} checks, {len(report.failures)} failed")
    if not report.passed:
        lines = [f"{c.name} on {c.fixture} (seed={c.seed}): {c.violation}" for c in report.failures]
        raise VerificationError("failed checks:\n  " + "\n  ".join(lines))
    return EXIT_OK
