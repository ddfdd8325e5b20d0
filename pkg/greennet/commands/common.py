"""Arguments and loading shared by the network-reading verbs"""
import argparse

from greennet.green import GreenOperator, green_direct
from greennet.netio import FORMATS, read_network
from greennet.network import NetworkSpec, schrodinger_matrix


def add_network_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("network", help="network file (JSON document or 'u v c' edge list)")
    parser.add_argument("--lambda", dest="lam", type=float, default=None, help="override the file's lambda")
    parser.add_argument("--normalize", action="store_true", help="rescale a non-unit weight instead of rejecting it")
    parser.add_argument("--format", choices=FORMATS, default=None, help="input format (default: from the file extension)")


def add_out_argument(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", default="-", help="output path, '-' for stdout")


def load_network(args: argparse.Namespace) -> NetworkSpec:
    return read_network(args.network, fmt=args.format, lam=args.lam, normalize=args.normalize)


def load_green(spec: NetworkSpec) -> GreenOperator:
    return green_direct(schrodinger_matrix(spec), spec.lam, spec.omega)
