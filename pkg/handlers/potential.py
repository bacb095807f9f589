import logging

import numpy as np

import potential
from errors import ParameterError
from handlers import Outcome
from utils.helpers import parse_complex, parse_kappa

logger = logging.getLogger(__name__)

# 'value' is kept as a synonym of 'none'
DERIVS = ('none', 'value', 'grad', 'hess')


def _density(expr):
    """q from 'const:V', a bare constant, or one of the built-in test densities"""
    named = {
        'one': lambda z: np.ones(np.shape(z)),
        'x': lambda z: np.real(z),
        'cos': lambda z: np.cos(np.real(z)) * np.cosh(np.imag(z)),
    }
    kind, value = parse_kappa(expr)
    if kind == 'const':
        return lambda z: np.full(np.shape(z), value)
    if expr in named:
        return named[expr]
    try:
        value = float(expr)
    except ValueError:
        raise ParameterError(f"unknown density {expr!r}")
    return lambda z: np.full(np.shape(z), value)


def register(subparsers):
    parser = subparsers.add_parser('potential', help='Newton potential with a singular weight')
    parser.add_argument('--q', default='one', help="density: const:V, a constant, 'one', 'x' or 'cos'")
    parser.add_argument('--weight', default=potential.POWER, help="'power' or 'log2'")
    parser.add_argument('--alpha', type=float, default=0.0)
    parser.add_argument('--r', type=float, default=1.0)
    parser.add_argument('--holder', type=float, default=1.0)
    parser.add_argument('--z', type=parse_complex, default=0j, help="point as 're,im'")
    parser.add_argument('--deriv', choices=DERIVS, default='none')
    parser.add_argument('--axis', type=int, nargs='+', default=[0],
                        help='axis j for grad, axes l j for hess')
    parser.set_defaults(handler=potential_handler)


def potential_handler(args, ctx):
    """Handle `potential`; grad runs the kernel/finite-difference cross-check"""
    spec = potential.PotentialSpec(q=_density(args.q), weight=args.weight, alpha=args.alpha,
                                   r=args.r, holder=args.holder)
    payload = {'spec': spec.record(), 'q': args.q, 'z': args.z, 'deriv': args.deriv}
    if args.deriv in ('none', 'value'):
        result = potential.newton_potential(spec, args.z)
        payload['result'] = result.to_dict()
        text = ctx.messages.get('potential_line', quantity='omega', value=result.value,
                                error=result.est_error, nodes=result.nodes_used)
    elif args.deriv == 'grad':
        j = args.axis[0]
        check = potential.gradient_cross_check(spec, args.z, j)
        payload['result'] = check
        text = ctx.messages.get('cross_check', kernel=check['kernel'], fd=check['finite_difference'],
                                diff=check['difference'])
    else:
        l, j = (args.axis + args.axis)[:2]
        result = potential.potential_hessian(spec, args.z, l, j)
        payload['result'] = result.to_dict()
        text = ctx.messages.get('potential_line', quantity=f'omega_{l}{j}', value=result.value,
                                error=result.est_error, nodes=result.nodes_used)
    logger.info(f"potential {args.deriv} at {args.z}: done")
    return Outcome(payload, text)
