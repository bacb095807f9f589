import logging

import numpy as np

import families
import grid as grd
import reports
import solver
from config.config import DEFAULT_MAX_ITERS, DEFAULT_TOL
from errors import DomainError, ParameterError
from handlers import Outcome
from utils.helpers import parse_kappa

logger = logging.getLogger(__name__)


def register(subparsers):
    parser = subparsers.add_parser('solve', help='Dirichlet problem on an annulus')
    parser.add_argument('--kappa', required=True, help="catalog id or const:V with V < 0")
    parser.add_argument('--alpha', type=float, default=None, help='family order for catalog ids')
    parser.add_argument('--boundary', choices=('exact', 'super'), default='exact',
                        help='boundary data from the exact solution or from the order-alpha supersolution')
    parser.add_argument('--rmin', '--r-min', dest='r_min', type=float, default=0.05)
    parser.add_argument('--rmax', '--r-max', dest='r_max', type=float, default=0.5)
    parser.add_argument('--nr', '--n-radial', dest='n_radial', type=int, default=65)
    parser.add_argument('--ntheta', '--n-angular', dest='n_angular', type=int, default=64)
    parser.add_argument('--richardson', action='store_true',
                        help='add one Richardson step against every other ring and angle')
    parser.add_argument('--tol', type=float, default=DEFAULT_TOL)
    parser.add_argument('--max-iters', type=int, default=DEFAULT_MAX_ITERS)
    parser.add_argument('--shift', type=float, default=1.0, help='linearization shift (>= 1 keeps monotonicity)')
    parser.add_argument('--radial', action='store_true', help='solve the radial ODE instead')
    parser.add_argument('--n', type=int, default=2049, help='radial node count')
    parser.add_argument('--verbose', action='store_true')
    parser.set_defaults(handler=solve_handler)


def _problem(args):
    """(label, kappa, reference solution or None, boundary callable)"""
    kind, value = parse_kappa(args.kappa)
    if kind == 'const':
        if not value < 0:
            raise DomainError(f"curvature must be strictly negative, got {value}")
        exact = families.hyperbolic_punctured_disk(-value)
        label = f'const{value:g}'
    else:
        exact = families.get_entry(value, alpha=args.alpha)
        if isinstance(exact, families.MaxPrinciplePair):
            raise ParameterError(f"{exact.label} is a comparison pair, not a solution")
        label = exact.id
    kappa = exact.kappa
    if args.boundary == 'super':
        A = -float(np.min(kappa(grd.circle_points(args.r_max, 64))))
        alpha = 0.5 if args.alpha is None else args.alpha
        return label, kappa, None, families.supersolution_family(alpha, A).u
    return label, kappa, exact, exact.u


def _solve_radial(args, ctx, label, kappa, exact, u_boundary):
    bc = (float(u_boundary(args.r_min)), float(u_boundary(args.r_max)))
    profile = solver.solve_radial(kappa, args.r_min, args.r_max, bc, n=args.n, tol=min(args.tol, 1e-8))
    payload = {'mode': 'radial', 'kappa': args.kappa, 'method': profile.method,
               'iterations': profile.iterations, 'residual': profile.residual}
    if exact is not None:
        payload['sup_error'] = float(np.max(np.abs(profile.u - exact.u(profile.r))))
    csv_path = ctx.path(f'solve_{label}_radial.csv')
    reports.write_csv(csv_path, ('r', 'u'), profile.rows(), ctx.manifest)
    json_path = ctx.path(f'solve_{label}_radial.json')
    reports.write_json(json_path, payload, ctx.manifest.finish(), kind='solve')
    lines = [ctx.messages.get('radial_done', method=profile.method, iterations=profile.iterations,
                              residual=profile.residual)]
    if 'sup_error' in payload:
        lines.append(ctx.messages.get('solve_error', error=payload['sup_error']))
    return Outcome(payload, '\n'.join(lines), files=[csv_path, json_path])


def solve_handler(args, ctx):
    """Handle `solve`: writes the field CSV and the iteration trace JSON"""
    cfg = solver.SolveConfig(max_iters=args.max_iters, tol=args.tol,
                             linearization_shift=args.shift, verbosity=args.verbose)
    label, kappa, exact, u_boundary = _problem(args)
    if args.radial:
        return _solve_radial(args, ctx, label, kappa, exact, u_boundary)

    g = grd.build_grid(args.r_min, args.r_max, args.n_radial, args.n_angular)
    solve = solver.solve_extrapolated if args.richardson else solver.solve_dirichlet_annulus
    field, trace = solve(kappa, solver.boundary_from(u_boundary, g), g, cfg)

    payload = {'mode': 'annulus', 'kappa': args.kappa, 'grid': g.header(), 'trace': trace.to_dict()}
    if exact is not None:
        payload['sup_error'] = float(np.max(np.abs(field.values - exact.u(g.z))))
    csv_path = ctx.path(f'solve_{label}.csv')
    reports.write_csv(csv_path, ('s', 'theta', 'u'), field.csv_rows(), ctx.manifest)
    json_path = ctx.path(f'solve_{label}_trace.json')
    reports.write_json(json_path, payload, ctx.manifest.finish(), kind='solve')

    lines = [ctx.messages.get('solve_done', iterations=trace.iterations, residual=trace.final_residual)]
    if 'sup_error' in payload:
        lines.append(ctx.messages.get('solve_error', error=payload['sup_error']))
    lines += [ctx.messages.get('written', path=p) for p in (csv_path, json_path)]
    return Outcome(payload, '\n'.join(lines), files=[csv_path, json_path])
