import logging

import numpy as np

import asymptotics
import families
import metrics
from handlers import Outcome, add_entry_arguments, resolve_entry
from errors import ParameterError
from utils.helpers import format_record, format_value, parse_complex

logger = logging.getLogger(__name__)


def register(subparsers):
    curvature = subparsers.add_parser('curvature', help='curvature, connection and Schwarzian of a metric')
    add_entry_arguments(curvature)
    curvature.add_argument('--z', required=True, type=parse_complex, action='append',
                           help="point as 're,im'; repeatable")
    curvature.add_argument('--pullback', action='store_true',
                           help='use the pullback construction of the nitsche alpha <= 0 branch')
    curvature.set_defaults(handler=curvature_handler)

    classify = subparsers.add_parser('classify', help='order, branch and remainder of a singularity')
    add_entry_arguments(classify)
    classify.add_argument('--which', choices=('u1', 'u2'), default='u2',
                          help='member of a comparison pair to classify')
    classify.set_defaults(handler=classify_handler)


def _density(args):
    if args.pullback:
        if args.id != 'nitsche':
            raise ParameterError("--pullback applies to the nitsche family only")
        alpha = 0.0 if args.alpha is None else args.alpha
        return f'nitsche-pullback(alpha={alpha:g})', families.nitsche_pullback(alpha)
    entry = resolve_entry(args)
    if isinstance(entry, families.MaxPrinciplePair):
        raise ParameterError(f"{entry.label} is a comparison pair, not a metric")
    return entry.label, entry.density()


def curvature_handler(args, ctx):
    """Handle `curvature`: metric quantities at the requested points"""
    label, m = _density(args)
    records = [metrics.metric_record(m, z) for z in args.z]
    lines = []
    for z, record in zip(args.z, records):
        lines.append(ctx.messages.get('curvature_line', kappa=record['kappa'], z=format_value(z)))
        lines.append(format_record(record))
    return Outcome({'id': label, 'points': records}, '\n'.join(lines))


def classify_handler(args, ctx):
    """Handle `classify`: order estimate, remainder samples and completeness of e^u"""
    entry = resolve_entry(args)
    if isinstance(entry, families.MaxPrinciplePair):
        u = getattr(entry, args.which)
        m = metrics.density_from_u(u)
    else:
        u = entry.u
        m = entry.density()

    estimate = asymptotics.order_details(u)
    remainder = asymptotics.remainder(u, estimate.alpha_hat, estimate.branch, estimate.alpha_stderr)
    samples = []
    for r in asymptotics.default_ladder()[::3]:
        mean, oscillation, _ = asymptotics.circle_stats(remainder, r)
        samples.append({'r': float(r), 'mean': float(np.real(mean)), 'oscillation': oscillation})

    probe_radii = 10.0 ** -np.arange(1, 21, dtype=float)
    lengths = metrics.completeness_probe(m, 0.5 * np.exp(0.7j), probe_radii)
    completeness = metrics.completeness_verdict(lengths, probe_radii)

    payload = {'id': entry.label, 'alpha_declared': entry.alpha, 'order': estimate.to_dict(),
               'remainder_samples': samples, 'completeness': completeness,
               'probe_lengths': lengths.tolist()}
    text = '\n'.join([
        ctx.messages.get('order_line', alpha=estimate.alpha_hat, stderr=estimate.alpha_stderr,
                         branch=estimate.branch, raw=estimate.raw_ratio),
        ctx.messages.get('completeness_line', verdict=completeness),
    ])
    logger.info(f"Classified {entry.label}: alpha_hat {estimate.alpha_hat:.5f}, {completeness}")
    return Outcome(payload, text)
