import logging

import asymptotics
import families
import grid as grd
import solver
from errors import ParameterError
from handlers import Outcome, add_entry_arguments, resolve_entry
from utils.helpers import format_verdicts

logger = logging.getLogger(__name__)

TARGETS = ('main-theorem', 'geometric', 'yau', 'wachstum', 'continuity', 'max-principle')


def register(subparsers):
    parser = subparsers.add_parser('verify', help='adjudicate asymptotic claims on a catalog entry')
    parser.add_argument('target', choices=TARGETS)
    add_entry_arguments(parser, required=False)
    parser.add_argument('--pair', default=None, help='comparison pair id for max-principle')
    parser.add_argument('--theta', type=float, default=0.7, help='ray angle for limit sequences')
    parser.set_defaults(handler=verify_handler)


def _solution(args):
    if args.id is None:
        raise ParameterError("--id is required for this target")
    entry = resolve_entry(args)
    if isinstance(entry, families.MaxPrinciplePair):
        raise ParameterError(f"{entry.label} is a comparison pair; use verify max-principle --pair")
    return entry


def _main_theorem(args):
    report = asymptotics.verify_main_theorem(_solution(args))
    return report.to_dict(), report.rate_verdicts, report.passed


def _geometric(args):
    entry = _solution(args)
    kappa0 = float(entry.kappa(1e-300))
    report = asymptotics.verify_geometric_limits(entry.density(), kappa0, entry.alpha, theta=args.theta)
    payload = report.to_dict()
    payload['id'] = entry.label
    return payload, report.verdicts, report.passed


def _yau(args):
    entry = _solution(args)
    report = asymptotics.verify_yau_ratios(entry.density(), theta=args.theta)
    payload = report.to_dict()
    payload['id'] = entry.label
    if report.status == asymptotics.PRECONDITION_FAILED:
        return payload, {'preconditions': report.status}, None
    return payload, report.verdicts, report.passed


def _wachstum(args):
    entry = _solution(args)
    report = asymptotics.wachstum_check(entry.u, entry.kappa)
    payload = report.to_dict()
    payload['id'] = entry.label
    return payload, report.verdicts, report.passed


def _continuity(args):
    entry = _solution(args)
    report = asymptotics.critical_continuity_check(entry.u, entry.kappa)
    payload = report.to_dict()
    payload['id'] = entry.label
    return payload, report.verdicts, report.passed


def _max_principle(args):
    """Hypothesis verdicts are reported, never adjudicated as a failed claim"""
    if args.pair is None:
        raise ParameterError("--pair is required for max-principle")
    pair = families.get_entry(args.pair, alpha=args.alpha, A=args.A, R=args.R)
    if not isinstance(pair, families.MaxPrinciplePair):
        raise ParameterError(f"{args.pair} is not a comparison pair")
    g = grd.build_grid(1e-3, 0.9 * pair.outer_radius, 33, 32)
    report = solver.check_max_principle(pair.u1, pair.u2, pair.kappa, g, outer_radius=pair.outer_radius)
    payload = report.to_dict()
    payload['pair'] = pair.record()
    payload['matches_expected_failure'] = (report.failing == [pair.expected_failure]
                                           if pair.expected_failure else not report.failing)
    verdicts = {f'hypothesis_{name}': 'pass' if item['passed'] else 'fail'
                for name, item in report.hypotheses.items()}
    verdicts['conclusion'] = 'pass' if report.conclusion_holds else 'fail'
    return payload, verdicts, None


HANDLERS = {
    'main-theorem': _main_theorem,
    'geometric': _geometric,
    'yau': _yau,
    'wachstum': _wachstum,
    'continuity': _continuity,
    'max-principle': _max_principle,
}


def verify_handler(args, ctx):
    """Handle `verify <target>`; a failed claim sets passed = False"""
    payload, verdicts, passed = HANDLERS[args.target](args)
    payload['target'] = args.target
    text = format_verdicts(verdicts, ctx.messages)
    if args.target == 'max-principle' and payload['failing']:
        text += '\n' + ctx.messages.get('hypothesis_failed', failing=', '.join(payload['failing']))
    elif args.target == 'yau' and passed is None:
        text += '\n' + ctx.messages.get('precondition_failed')
    logger.info(f"verify {args.target}: passed {passed}")
    return Outcome(payload, text, passed=passed)
