import argparse
import logging
import sys

from greennet.commands.common import add_network_arguments, add_out_argument, load_green, load_network
from greennet.config import VERIFY_TOL
from greennet.errors import EXIT_OK, VerificationError
from greennet.funspace import max_abs
from greennet.green import pinv_oracle
from greennet.netio import parse_anchors, write_matrix
from greennet.network import schrodinger_matrix
from greennet.vertex_addition import VertexAttachment, added_vertex_pinv, extended_network

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("add-vertex", help="pseudo-inverse of the Schrodinger matrix after attaching a vertex")
    add_network_arguments(parser)
    parser.add_argument("--attach", required=True, help="anchors as x1:a1,x2:a2,...")
    parser.add_argument("--weight", dest="new_weight", type=float, required=True, help="weight value of the new vertex")
    parser.add_argument("--label", default="x'", help="label of the new vertex")
    parser.add_argument("--raw", action="store_true", help="skip the Moore-Penrose projection for lambda = 0")
    parser.add_argument("--verify", action="store_true", help="compare against a from-scratch pseudo-inverse")
    add_out_argument(parser)
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    spec = load_network(args)
    att = VertexAttachment(new_vertex=args.label, new_weight_value=args.new_weight, anchors=tuple(parse_anchors(args.attach)))
    g = load_green(spec)
    x = added_vertex_pinv(g, spec, att, mp_correct=not args.raw)
    write_matrix(args.out, spec.vertices + (args.label,), x)

    if args.verify:
        reference = pinv_oracle(schrodinger_matrix(extended_network(spec, att)))
        deviation = max_abs(x - reference)
        print(f"max deviation: {deviation:.3e} (limit {VERIFY_TOL:.0e})", file=sys.stderr)
        if deviation > VERIFY_TOL:
            raise VerificationError(f"closed-form update deviates from the from-scratch pseudo-inverse by {deviation:.3e}")
    return EXIT_OK
