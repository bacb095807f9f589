from dataclasses import dataclass, field

import families as catalog


@dataclass
class Outcome:
    """What a handler hands back: JSON payload, console text and an optional verdict"""
    payload: dict
    text: str = ''
    passed: bool = None
    files: list = field(default_factory=list)


def add_entry_arguments(parser, required=True):
    """--id plus the optional family parameters"""
    parser.add_argument('--id', required=required, help='catalog id, e.g. nitsche or alpha1-holder-rate(0.5)')
    parser.add_argument('--alpha', type=float, default=None)
    parser.add_argument('--A', type=float, default=None, dest='A')
    parser.add_argument('--a', type=float, default=None, dest='a')
    parser.add_argument('--R', type=float, default=None, dest='R')
    parser.add_argument('--beta', type=float, default=None)


def resolve_entry(args):
    return catalog.get_entry(args.id, alpha=args.alpha, A=args.A, a=args.a, R=args.R, beta=args.beta)
