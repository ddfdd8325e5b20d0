import argparse
import logging
import sys
from pathlib import Path
from typing import List

from greennet.bench import run_bench, write_csv
from greennet.errors import EXIT_OK, UsageError

logger = logging.getLogger(__name__)


def _int_list(text: str) -> List[int]:
    try:
        return [int(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise UsageError(f"expected a comma-separated list of integers, got {text!r}")


def register(subparsers) -> None:
    parser = subparsers.add_parser("bench", help="time the closed-form update against recomputation")
    parser.add_argument("--n", dest="n_list", default="100,500,1000", help="network sizes, comma-separated")
    parser.add_argument("--m", dest="m_list", default="1,5", help="anchor counts, comma-separated")
    parser.add_argument("--trials", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--lambda", dest="lam", type=float, default=0.0)
    parser.add_argument("--out", default="-", help="CSV path, '-' for stdout")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    rows = run_bench(_int_list(args.n_list), _int_list(args.m_list), trials=args.trials, seed=args.seed, lam=args.lam)
    if args.out == "-":
        write_csv(rows, sys.stdout)
    else:
        try:
            with Path(args.out).open("w", encoding="utf-8", newline="") as stream:
                write_csv(rows, stream)
        except OSError as e:
            raise UsageError(f"cannot write {args.out}: {e.strerror}")
        logger.info(f"Wrote {len(rows)} bench rows to {args.out}")
    return EXIT_OK
