import argparse
import logging

from greennet.commands.common import add_network_arguments, add_out_argument, load_green, load_network
from greennet.errors import EXIT_OK
from greennet.netio import write_matrix

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("green", help="orthogonal Green kernel G of a network")
    add_network_arguments(parser)
    add_out_argument(parser)
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    spec = load_network(args)
    g = load_green(spec)
    logger.info(f"Green kernel of {args.network} computed (n={g.n}, lambda={g.lam})")
    write_matrix(args.out, spec.vertices, g.kernel)
    return EXIT_OK
