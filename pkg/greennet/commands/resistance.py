import argparse
import logging

from greennet.commands.common import add_network_arguments, load_green, load_network
from greennet.errors import EXIT_OK, UnsupportedError
from greennet.green import effective_resistance, kirchhoff_index

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("resistance", help="effective resistance between two vertices")
    add_network_arguments(parser)
    parser.add_argument("x")
    parser.add_argument("y")
    parser.set_defaults(handler=run_resistance)

    parser = subparsers.add_parser("kirchhoff", help="Kirchhoff index of a network")
    add_network_arguments(parser)
    parser.set_defaults(handler=run_kirchhoff)


def _require_lambda_zero(lam: float, what: str) -> None:
    if lam > 0:
        raise UnsupportedError(f"{what} needs lambda = 0, got {lam}")


def run_resistance(args: argparse.Namespace) -> int:
    spec = load_network(args)
    _require_lambda_zero(spec.lam, "effective resistance")
    g = load_green(spec)
    value = effective_resistance(g, spec.vertex(args.x), spec.vertex(args.y))
    logger.info(f"Effective resistance {args.x}-{args.y} on {args.network}: {value:.6g}")
    print(f"{value:.17g}")
    return EXIT_OK


def run_kirchhoff(args: argparse.Namespace) -> int:
    spec = load_network(args)
    _require_lambda_zero(spec.lam, "Kirchhoff index")
    value = kirchhoff_index(load_green(spec))
    logger.info(f"Kirchhoff index of {args.network} (n={spec.n}): {value:.6g}")
    print(f"{value:.17g}")
    return EXIT_OK
