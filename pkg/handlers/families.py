import logging

import families
from handlers import Outcome, add_entry_arguments, resolve_entry
from utils.helpers import format_record, format_value, parse_complex

logger = logging.getLogger(__name__)


def register(subparsers):
    parser = subparsers.add_parser('families', help='list or evaluate catalog entries')
    actions = parser.add_subparsers(dest='action', required=True)

    listing = actions.add_parser('list', help='list catalog entries')
    listing.set_defaults(handler=list_handler)

    evaluation = actions.add_parser('eval', help='evaluate an entry at a point')
    add_entry_arguments(evaluation)
    evaluation.add_argument('--z', required=True, type=parse_complex, help="point as 're,im'")
    evaluation.add_argument('--residual', action='store_true', help='also run the random-point residual oracle')
    evaluation.set_defaults(handler=eval_handler)


def list_handler(args, ctx):
    """Handle `families list`"""
    records = [entry.record() for entry in families.list_entries()]
    lines = [ctx.messages.get('catalog_header', count=len(records))]
    for record in records:
        lines.append(ctx.messages.get('catalog_line', id=record['id'], alpha=format_value(record['alpha']),
                                      status=record['status'], citation=record['citation']))
    logger.info(f"Listed {len(records)} catalog entries")
    return Outcome({'entries': records}, '\n'.join(lines))


def eval_handler(args, ctx):
    """Handle `families eval`: closed-form values at one point"""
    entry = resolve_entry(args)
    record = families.eval_record(entry, args.z)
    payload = {'entry': entry.record(), 'evaluation': record}
    if args.residual:
        report = families.residual(entry)
        payload['residual'] = {'max_residual': report.max_residual,
                               'max_kappa_discrepancy': report.max_kappa_discrepancy,
                               'n_points': report.n_points, 'passed': report.passed}
    text = ctx.messages.get('eval_header', id=entry.label, z=format_value(args.z)) + '\n' + format_record(record)
    return Outcome(payload, text)
