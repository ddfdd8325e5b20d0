"""
Command-line entry point: `python -m greennet <verb> ...` or `python run.py <verb> ...`.
"""
import argparse
import logging
import sys
from typing import Optional, Sequence

from greennet.commands import add_vertex, bench, green, resistance, selfcheck
from greennet.config import LOG_LEVEL, PROJECT_NAME, PROJECT_VERSION
from greennet.errors import EXIT_INTERNAL, GreenNetError, UsageError

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s - %(levelname)s - %(name)s - %(message)s"
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


class CliParser(argparse.ArgumentParser):
    """Usage errors raise UsageError (exit 1) instead of exiting with status 2"""

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> CliParser:
    parser = CliParser(prog="greennet", description=f"{PROJECT_NAME}: Green operators of networks and their vertex-addition updates")
    parser.add_argument("--version", action="version", version=f"{PROJECT_NAME} {PROJECT_VERSION}")
    parser.add_argument("--log-level", choices=LOG_LEVELS, type=str.upper, default=None, help=f"default {LOG_LEVEL}")

    # Include commands
    subparsers = parser.add_subparsers(dest="command", metavar="command", parser_class=CliParser)
    subparsers.required = True
    green.register(subparsers)
    add_vertex.register(subparsers)
    resistance.register(subparsers)
    bench.register(subparsers)
    selfcheck.register(subparsers)
    return parser


def configure_logging(level: Optional[str]) -> None:
    logging.basicConfig(level=(level or LOG_LEVEL).upper(), format=LOG_FORMAT, stream=sys.stderr, force=True)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Global handler: every GreenNetError maps to its exit code, anything else to 4"""
    try:
        args = build_parser().parse_args(argv)
        configure_logging(args.log_level)
        return args.handler(args)
    except GreenNetError as e:
        logger.error(f"{type(e).__name__}: {e.detail}")
        print(f"error: {e.detail}", file=sys.stderr)
        return e.exit_code
    except Exception as e:
        logger.exception(f"Unhandled error: {e}")
        print("error: internal error", file=sys.stderr)
        return EXIT_INTERNAL
