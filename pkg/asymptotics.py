"""Singularity classification, remainder extraction and rate verification.

Radii ladders:
    default_ladder()  r = 2^-k, k = LADDER_K_MIN..LADDER_K_MAX  (order estimates)
    rate_ladder()     r = 10^-k, k = 2..RATE_LADDER_DECADES      (growth fits)
    limit_ladder()    r = 10^-k, k = 1..7                        (geometric limits)
"""
import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

import families
import grid as grd
import metrics
from config.config import LADDER_K_MAX, LADDER_K_MIN, RATE_LADDER_DECADES
from errors import BranchMismatchError, EvaluationError, ParameterError, SpanTooSmallError

logger = logging.getLogger(__name__)

SUBCRITICAL = 'subcritical'
CRITICAL = 'critical'

PASS = 'pass'
FAIL = 'fail'
INDETERMINATE = 'indeterminate'
RECORDED = 'recorded'
PRECONDITION_FAILED = 'precondition-failed'

RATE_TOL = 0.05
CONTINUITY_EPS = 1e-3
CONTINUITY_SLOPE = -0.02
CRITICAL_WINDOW = 0.02
CRITICAL_DRIFT_TOL = 0.25
CONDITION_LIMIT = 1e4
LIMIT_TOL = 1e-2
GROWTH_FLOOR = 1e-300
STEP_FRACTION = 0.02
KINK_MARGIN = 0.3
RESOLVE_TOL = 1e-2
AGREEMENT_TOL = 1e-2


def default_ladder(k_min=LADDER_K_MIN, k_max=LADDER_K_MAX):
    return 2.0 ** -np.arange(k_min, k_max + 1, dtype=float)


def rate_ladder(k_max=RATE_LADDER_DECADES, k_min=2):
    return 10.0 ** -np.arange(k_min, k_max + 1, dtype=float)


def limit_ladder(k_max=7, k_min=1):
    return 10.0 ** -np.arange(k_min, k_max + 1, dtype=float)


def _log_inv(r):
    return np.log(1.0 / np.asarray(r, dtype=float))


def max_on_circle(u, r, n_theta=128):
    """sup of u on |z| = r: equispaced scan plus one bounded refinement around the argmax"""
    if n_theta < 64:
        raise ParameterError(f"n_theta must be >= 64, got {n_theta}")
    theta = 2.0 * np.pi * np.arange(n_theta) / n_theta
    values = np.asarray(u(r * np.exp(1j * theta)), dtype=float)
    j = int(np.argmax(values))
    width = 2.0 * np.pi / n_theta
    refined = minimize_scalar(lambda t: -float(u(r * np.exp(1j * t))),
                              bounds=(theta[j] - width, theta[j] + width),
                              method='bounded', options={'xatol': 1e-10})
    return max(float(values[j]), -float(refined.fun))


def circle_stats(f, r, n_theta=64):
    """(mean, oscillation max|f - mean|, max|f|) of f on |z| = r"""
    values = np.asarray(f(grd.circle_points(r, n_theta)))
    mean = np.mean(values)
    return mean, float(np.max(np.abs(values - mean))), float(np.max(np.abs(values)))


def _check_radii(radii, min_count, min_decades):
    radii = np.asarray(radii, dtype=float)
    if radii.ndim != 1 or len(radii) < min_count:
        raise SpanTooSmallError(f"need at least {min_count} radii, got {radii.size}")
    if np.any(np.diff(radii) >= 0) or radii[-1] <= 0 or radii[0] >= 1:
        raise SpanTooSmallError("radii must decrease strictly inside (0, 1)")
    span = np.log10(radii[0] / radii[-1])
    if span < min_decades:
        raise SpanTooSmallError(f"radii span {span:.2f} decades, need {min_decades}")
    return radii


@dataclass(frozen=True)
class OrderEstimate:
    alpha_hat: float
    alpha_stderr: float
    raw_ratio: float
    quotients: tuple
    critical_corrected: bool
    finite: bool
    log_drift: float = float('nan')

    @property
    def branch(self):
        return CRITICAL if abs(self.alpha_hat - 1.0) <= 3.0 * self.alpha_stderr else SUBCRITICAL

    def to_dict(self):
        return {'alpha_hat': self.alpha_hat, 'alpha_stderr': self.alpha_stderr,
                'raw_ratio': self.raw_ratio, 'branch': self.branch,
                'critical_corrected': self.critical_corrected, 'finite': self.finite,
                'log_drift': self.log_drift}


def _log_drift(q, L_mid):
    """(q + 1) log(1/r) on the innermost quotients, extrapolated linearly in 1/log(1/r) to r = 0

    Tends to 1 when M_u = -log r - log log(1/r) + O(1); grows without bound
    for a pure power of order below one.
    """
    t = 1.0 / L_mid[-4:]
    ratio = (q[-4:] + 1.0) / t
    if len(t) < 2 or not np.all(np.isfinite(ratio)):
        return float('nan')
    return float(np.polyfit(t, ratio, 1)[1])


def order_details(u, radii=None, n_theta=128, min_decades=4, min_count=6):
    """Order estimate from difference quotients of M_u against log r on the 3 innermost pairs

    A quotient approximates r M_u'(r). The critical log log slope
    1/log(1/r) is subtracted only when the quotients drift like it (the
    extrapolated log drift lies within CRITICAL_DRIFT_TOL of 1) and the
    corrected value lands within CRITICAL_WINDOW of 1; the stderr then
    covers the neglected 1/log(1/r)^2 term. Otherwise the raw slope stands.
    """
    radii = _check_radii(default_ladder() if radii is None else radii, min_count, min_decades)
    M = np.array([max_on_circle(u, r, n_theta) for r in radii])
    s = np.log(radii)
    q = np.diff(M) / np.diff(s)
    inner_q = q[-3:]
    L_all = -0.5 * (s[1:] + s[:-1])
    L_mid = L_all[-3:]
    raw = -float(np.mean(inner_q))
    corrected = -float(np.mean(inner_q - 1.0 / L_mid))
    drift = _log_drift(q, L_all)
    spread = float(np.max(inner_q) - np.min(inner_q))
    finite = bool(np.all(np.isfinite(q[-2:]))
                  and abs(q[-1] - q[-2]) <= max(0.05, 0.1 * abs(q[-1])))
    L_inner = _log_inv(radii[-1])

    if abs(corrected - 1.0) <= CRITICAL_WINDOW and abs(drift - 1.0) <= CRITICAL_DRIFT_TOL:
        alpha_hat, stderr, used = corrected, max(spread, 1.0 / L_inner ** 2, 1e-6), True
    else:
        alpha_hat, stderr, used = raw, max(spread, 1e-6), False
    estimate = OrderEstimate(alpha_hat, stderr, float(M[-1] / L_inner), tuple(float(x) for x in q),
                             used, finite, drift)
    logger.debug(f"order estimate {alpha_hat:.6f} +- {stderr:.2e} (corrected: {used}, drift {drift:.3f})")
    return estimate


def estimate_order(u, radii=None, n_theta=128):
    """(alpha_hat, alpha_stderr) of u at 0"""
    estimate = order_details(u, radii, n_theta)
    return estimate.alpha_hat, estimate.alpha_stderr


def order_is_finite(u, radii=None):
    return order_details(u, radii).finite


def remainder(u, alpha_hat, branch, alpha_stderr=1e-2):
    """v = u + alpha log|z| (subcritical) or w = u + log|z| + log log(1/|z|) (critical)"""
    near_one = abs(alpha_hat - 1.0) <= 3.0 * alpha_stderr
    if branch == CRITICAL:
        if not near_one:
            raise BranchMismatchError(f"critical remainder requested for alpha_hat = {alpha_hat:.4f}")
        return lambda z: u(z) + np.log(np.abs(z)) + np.log(_log_inv(np.abs(z)))
    if branch == SUBCRITICAL:
        if near_one or alpha_hat > 1.0:
            raise BranchMismatchError(f"subcritical remainder requested for alpha_hat = {alpha_hat:.4f}")
        return lambda z: u(z) + alpha_hat * np.log(np.abs(z))
    raise BranchMismatchError(f"unknown branch {branch!r}")


@dataclass(frozen=True)
class GrowthFit:
    """log max|g| ~ p log r + q log log(1/r) + c + d / log(1/r)"""
    p_hat: float
    q_hat: float
    c_hat: float
    p_halfwidth: float
    q_halfwidth: float
    residual: float
    condition: float
    indeterminate: bool
    trivial: bool = False
    d_hat: float = 0.0

    def as_tuple(self):
        return self.p_hat, self.q_hat, self.c_hat

    def to_dict(self):
        return {'p_hat': self.p_hat, 'q_hat': self.q_hat, 'c_hat': self.c_hat, 'd_hat': self.d_hat,
                'p_halfwidth': self.p_halfwidth, 'q_halfwidth': self.q_halfwidth,
                'residual': self.residual, 'condition': self.condition,
                'indeterminate': self.indeterminate, 'trivial': self.trivial}


def fit_growth(g, radii=None, n_theta=64, min_decades=5, min_count=8):
    """Least-squares growth exponents of max_{|z|=r}|g| against (log r, log log(1/r), 1, 1/log(1/r))

    The last column absorbs (1 + O(1/log(1/r))) factors, which otherwise
    bias q on a finite ladder. The conditioning check covers the first
    three columns only.
    """
    radii = _check_radii(rate_ladder() if radii is None else radii, min_count, min_decades)
    peaks = np.array([max_on_circle(lambda z: np.abs(g(z)), r, n_theta) for r in radii])
    if not np.all(np.isfinite(peaks)):
        raise EvaluationError("g is not finite on every sample circle")
    keep = peaks > GROWTH_FLOOR
    if not np.any(keep):
        return GrowthFit(float('nan'), float('nan'), float('-inf'), 0.0, 0.0, 0.0, 1.0, False, trivial=True)
    if keep.sum() < min_count:
        raise SpanTooSmallError("too few circles where g is nonzero")

    r = radii[keep]
    X = np.column_stack([np.log(r), np.log(_log_inv(r)), np.ones(keep.sum()), 1.0 / _log_inv(r)])
    y = np.log(peaks[keep])
    coef, *_ = np.linalg.lstsq(X, y, rcond=None)
    resid = y - X @ coef
    rss = float(resid @ resid)
    condition = float(np.linalg.cond(X[:, :3] / np.linalg.norm(X[:, :3], axis=0)))
    dof = max(len(y) - X.shape[1], 1)
    cov = rss / dof * np.linalg.pinv(X.T @ X)
    half = 2.0 * np.sqrt(np.maximum(np.diag(cov), 0.0))
    indeterminate = condition > CONDITION_LIMIT
    if indeterminate:
        logger.warning(f"Growth fit ill-conditioned (cond {condition:.3g}); verdict indeterminate")
    return GrowthFit(float(coef[0]), float(coef[1]), float(coef[2]), float(half[0]), float(half[1]),
                     float(np.sqrt(rss / len(y))), condition, indeterminate, d_hat=float(coef[3]))


def bound_verdict(fit, p, q, tol=RATE_TOL):
    """Verdict for the claim |g| = O(|z|^p log(1/|z|)^q)"""
    result = {'claim': {'p': p, 'q': q}, 'sharp': False}
    if fit.trivial:
        return {**result, 'verdict': PASS}
    if fit.indeterminate:
        return {**result, 'verdict': INDETERMINATE}
    dp = fit.p_hat - p
    if dp > tol:
        return {**result, 'verdict': PASS}
    if abs(dp) <= tol and fit.q_hat <= q + tol:
        return {**result, 'verdict': PASS, 'sharp': abs(fit.q_hat - q) <= tol}
    return {**result, 'verdict': FAIL}


def continuity_verdict(fit, g, radii, n_theta=64):
    """'Continuous at 0': fitted p >= -0.02, small oscillation and settled circle means innermost"""
    mean_in, osc_in, _ = circle_stats(g, radii[-1], n_theta)
    mean_prev, _, _ = circle_stats(g, radii[-2], n_theta)
    drift = float(abs(mean_in - mean_prev))
    ok = fit.trivial or (fit.p_hat >= CONTINUITY_SLOPE and osc_in <= CONTINUITY_EPS and drift <= CONTINUITY_EPS)
    return {'claim': 'continuous', 'verdict': PASS if ok else FAIL,
            'oscillation': osc_in, 'mean_drift': drift}


def extrapolate_critical(radii, values, points=5, degree=2):
    """Intercept of a least-squares polynomial in t = 1/log(1/r) over the innermost radii"""
    t = 1.0 / _log_inv(radii)[-points:]
    y = np.asarray(values)[-points:]
    real = np.polyfit(t, np.real(y), degree)[-1]
    if np.iscomplexobj(y):
        return complex(real, np.polyfit(t, np.imag(y), degree)[-1])
    return float(real)


def aitken(values):
    """Guarded Aitken delta-squared limit of the last three terms"""
    x0, x1, x2 = (np.asarray(values)[-3:]).tolist()
    denom = x2 - 2.0 * x1 + x0
    if abs(denom) <= 1e-14 * max(abs(x2), 1.0):
        return x2
    estimate = x2 - (x2 - x1) ** 2 / denom
    if abs(estimate - x2) > 10.0 * abs(x2 - x1):
        return x2
    return estimate


def extrapolate(radii, values, branch):
    return extrapolate_critical(radii, values) if branch == CRITICAL else aitken(values)


def circle_max_convexity(u, radii, n_theta=128):
    """Smallest second divided difference of M_u against log r (>= 0 for convex)"""
    radii = np.asarray(radii, dtype=float)
    M = np.array([max_on_circle(u, r, n_theta) for r in radii])
    s = np.log(radii)
    slopes = np.diff(M) / np.diff(s)
    second = 2.0 * np.diff(slopes) / (s[2:] - s[:-2])
    return float(np.min(second))


# Main theorem

@dataclass(frozen=True)
class SolvedField:
    """A solved grid field with its curvature, analysed at low confidence"""
    field: grd.GridField
    kappa: object
    label: str = 'solved-field'


@dataclass
class SingularityReport:
    target: str
    alpha_hat: float
    alpha_stderr: float
    branch: str
    raw_ratio: float
    alpha_declared: float = None
    critical_corrected: bool = False
    remainder_samples: list = field(default_factory=list)
    fits: dict = field(default_factory=dict)
    rate_verdicts: dict = field(default_factory=dict)
    limit_values: dict = field(default_factory=dict)
    confidence: str = 'high'
    notes: list = field(default_factory=list)

    @property
    def passed(self):
        return all(v['verdict'] in (PASS, INDETERMINATE, RECORDED) for v in self.rate_verdicts.values())

    def to_dict(self):
        return {
            'target': self.target,
            'alpha_declared': self.alpha_declared,
            'alpha_hat': self.alpha_hat,
            'alpha_stderr': self.alpha_stderr,
            'branch': self.branch,
            'raw_ratio': self.raw_ratio,
            'critical_corrected': self.critical_corrected,
            'remainder_samples': self.remainder_samples,
            'fits': self.fits,
            'rate_verdicts': self.rate_verdicts,
            'limit_values': self.limit_values,
            'confidence': self.confidence,
            'notes': self.notes,
            'passed': self.passed,
        }


def _laplacian_quarter(u, kappa, branch):
    """Remainder d^2/dz dzbar = Delta/4, from the equation itself"""
    def mixed(z):
        lap = -np.asarray(kappa(z), dtype=float) * np.exp(2.0 * u(z))
        if branch == CRITICAL:
            r = np.abs(z)
            lap = lap - 1.0 / (r * _log_inv(r)) ** 2
        return 0.25 * lap
    return mixed


def _stencil(rem, order, fraction, rho=None):
    """Wirtinger derivative of rem with step fraction*|z|, zero where rho < KINK_MARGIN |z|"""
    diff = grd.dz if order == 1 else grd.dzz

    def g(z):
        scalar = np.ndim(z) == 0
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        out = np.zeros(z.shape, dtype=complex)
        keep = np.ones(z.shape, dtype=bool)
        if rho is not None:
            keep = np.asarray(rho(z)) >= KINK_MARGIN * np.abs(z)
        if np.any(keep):
            out[keep] = diff(rem, z[keep], h=fraction * np.abs(z[keep]))
        return complex(out[0]) if scalar else out
    return g


def _resolved_count(rem, order, radii, rho=None, n_theta=64):
    """Leading radii on which the step and half-step derivatives agree to RESOLVE_TOL"""
    coarse = _stencil(rem, order, STEP_FRACTION, rho)
    fine = _stencil(rem, order, STEP_FRACTION / 2.0, rho)
    for k, r in enumerate(radii):
        z = grd.circle_points(r, n_theta)
        a, b = coarse(z), fine(z)
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            return k
        if np.max(np.abs(a - b)) > RESOLVE_TOL * np.max(np.abs(a)):
            return k
    return len(radii)


def _agreement(numeric, closed, radii, rho=None, n_theta=64):
    """Worst relative gap between two derivative evaluations over the circles"""
    worst = 0.0
    for r in radii:
        z = grd.circle_points(r, n_theta)
        if rho is not None:
            z = z[np.asarray(rho(z)) >= KINK_MARGIN * np.abs(z)]
        a, b = np.asarray(numeric(z)), np.asarray(closed(z))
        scale = max(float(np.max(np.abs(b))), GROWTH_FLOOR)
        worst = max(worst, float(np.max(np.abs(a - b))) / scale)
    return worst


def _spliced(outer, inner, r_cut):
    """outer on |z| >= r_cut, inner below"""
    def g(z):
        scalar = np.ndim(z) == 0
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        above = np.abs(z) >= r_cut
        out = np.zeros(z.shape, dtype=complex)
        if np.any(above):
            out[above] = outer(z[above])
        if not np.all(above):
            out[~above] = inner(z[~above])
        return complex(out[0]) if scalar else out
    return g


def _remainder_derivative(target, rem, order, radii, name, report):
    """Differenced remainder derivative on its resolved radii, continued by a closed form it matches

    Returns:
        (g, radii used for the fit, record of where the values came from)
    """
    rho = getattr(target, 'rho', None)
    numeric = _stencil(rem, order, STEP_FRACTION, rho)
    k = _resolved_count(rem, order, radii, rho)
    record = {'derivative_source': 'numeric', 'resolved_to': float(radii[k - 1]) if k else None,
              'closed_form_agreement': None}
    closed = None
    if getattr(target, 'has_closed_derivatives', False):
        closed = target.remainder_z if order == 1 else target.remainder_zz
    if closed is not None and k > 0:
        agreement = _agreement(numeric, closed, radii[:k], rho)
        record['closed_form_agreement'] = agreement
        if agreement > AGREEMENT_TOL:
            report.notes.append(f'{name}: closed form departs from differencing by {agreement:.2e}')
        elif k < len(radii):
            record['derivative_source'] = 'numeric+closed-form'
            return _spliced(numeric, closed, radii[k - 1] * (1.0 - 1e-9)), radii, record
    return numeric, radii[:k], record


def _rate_rows(alpha):
    """Main theorem claims per derivative: ('continuous' | (p, q) | 'half')"""
    if alpha == 1:
        first, second = (-1.0, -2.0), (-2.0, -2.0)
    elif alpha > 0.5:
        first, second = (1.0 - 2.0 * alpha, 0.0), (-2.0 * alpha, 0.0)
    elif alpha == 0.5:
        first, second = 'half', (-1.0, 0.0)
    else:
        first = 'continuous'
        second = 'continuous' if alpha <= 0 else (-2.0 * alpha, 0.0)
    return first, second


def _judge(name, claim, g, radii, fit, report, alpha):
    if claim == 'continuous':
        report.rate_verdicts[name] = continuity_verdict(fit, g, radii)
    elif claim == 'half':
        strong = bound_verdict(fit, 0.0, 0.0)
        weak = bound_verdict(fit, 0.0, 1.0)
        verdict = strong['verdict']
        if fit.q_halfwidth >= 0.5 and verdict != PASS:
            verdict = INDETERMINATE
        report.rate_verdicts[name] = {'claim': 'O(1)', 'verdict': verdict, 'sharp': strong['sharp'],
                                      'log_claim': weak['verdict']}
    else:
        report.rate_verdicts[name] = bound_verdict(fit, *claim)
    if name.endswith('_z') and alpha < 0:
        report.rate_verdicts[f'{name}_power'] = {'claim': {'p': 1.0 - 2.0 * alpha, 'q': 0.0},
                                                 'verdict': RECORDED, 'p_hat': fit.p_hat}


def verify_main_theorem(target, order_radii=None, rate_radii=None):
    """Classify the singularity and adjudicate the derivative rate table

    The remainder is extracted from u with the estimated order, or the
    declared one once the estimate confirms it within LIMIT_TOL. Its
    derivatives are differenced on the radii where rounding leaves them
    resolved. A closed form continues the ladder only after matching the
    differenced values there; fits record the source and the agreement.

    Args:
        target: ClosedFormSolution, or SolvedField for low-confidence grid analysis
        order_radii: radii for the order estimate (default 2^-8..2^-26)
        rate_radii: radii for the growth fits (default 10^-2..10^-60)

    Returns:
        SingularityReport
    """
    solved = isinstance(target, SolvedField)
    if solved:
        g = target.field.grid
        u = target.field.as_callable()
        kappa = target.kappa
        order_radii = np.geomspace(g.r_max * 0.5, g.r_min * 1.05, 10) if order_radii is None else order_radii
        estimate = order_details(u, order_radii, min_decades=0)
        label, declared = target.label, None
    else:
        u, kappa = target.u, target.kappa
        estimate = order_details(u, order_radii)
        label, declared = target.label, target.alpha

    alpha_hat, stderr = estimate.alpha_hat, estimate.alpha_stderr
    report = SingularityReport(label, alpha_hat, stderr, estimate.branch, estimate.raw_ratio,
                               alpha_declared=declared, critical_corrected=estimate.critical_corrected)
    if alpha_hat > 1.0 + 3.0 * stderr:
        report.notes.append('order estimate exceeds 1')
    report.rate_verdicts['order_bound'] = {'claim': 'alpha <= 1',
                                           'verdict': PASS if alpha_hat <= 1.0 + 3.0 * stderr else FAIL}

    confirmed = declared is not None and abs(alpha_hat - declared) <= LIMIT_TOL
    if declared is not None and not confirmed:
        report.notes.append(f'estimated order {alpha_hat:.4f} differs from declared {declared:g}')
    if confirmed:
        branch = CRITICAL if declared == 1 else SUBCRITICAL
        alpha = declared
    else:
        branch = estimate.branch
        alpha = 1.0 if branch == CRITICAL else alpha_hat
    rem = remainder(u, alpha, branch, stderr)
    if solved:
        g = target.field.grid
        radii = np.geomspace(g.r_max * 0.5, g.r_min * 1.5, 10) if rate_radii is None else rate_radii
        report.confidence = 'low'
    else:
        radii = rate_ladder() if rate_radii is None else np.asarray(rate_radii)
    report.branch = branch

    prefix = 'w' if branch == CRITICAL else 'v'
    for r in (order_radii if order_radii is not None else default_ladder()):
        mean, osc, _ = circle_stats(rem, r)
        report.remainder_samples.append({'r': float(r), 'mean': float(np.real(mean)), 'oscillation': osc})
    means = [circle_stats(rem, r)[0] for r in radii[-5:]]
    report.limit_values[f'{prefix}(0)'] = float(np.real(extrapolate(radii[-5:], means, branch)))
    if branch == SUBCRITICAL:
        _, osc, _ = circle_stats(rem, radii[-1])
        report.rate_verdicts[f'{prefix}_continuous'] = {
            'claim': 'continuous', 'verdict': PASS if osc <= CONTINUITY_EPS else FAIL, 'oscillation': osc}

    first, second = _rate_rows(alpha)
    mixed = _laplacian_quarter(u, kappa, branch)
    fit_kwargs = {'min_decades': 0} if solved else {}
    for name, order, claim in ((f'{prefix}_z', 1, first), (f'{prefix}_zz', 2, second)):
        if solved:
            g_fn = (lambda z, d=grd.dz if order == 1 else grd.dzz: d(rem, z))
            fit_radii, record = radii, {'derivative_source': 'numeric'}
        else:
            g_fn, fit_radii, record = _remainder_derivative(target, rem, order, radii, name, report)
        try:
            fit = fit_growth(g_fn, fit_radii, **fit_kwargs)
        except SpanTooSmallError as exc:
            report.fits[name] = record
            report.rate_verdicts[name] = {'claim': claim, 'verdict': INDETERMINATE}
            report.notes.append(f'{name}: differencing resolved too little of the ladder ({exc})')
            continue
        report.fits[name] = {**fit.to_dict(), **record}
        _judge(name, claim, g_fn, fit_radii, fit, report, alpha)

    name = f'{prefix}_zzbar'
    fit = fit_growth(mixed, radii, **fit_kwargs)
    report.fits[name] = {**fit.to_dict(), 'derivative_source': 'equation'}
    _judge(name, second, mixed, radii, fit, report, alpha)

    logger.info(f"Main theorem on {label}: alpha_hat {alpha_hat:.5f}, branch {branch}, "
                f"passed {report.passed}")
    return report


# Limits

@dataclass
class LimitReport:
    """Sequences over radii with extrapolated limits and per-quantity verdicts"""
    name: str
    radii: list
    sequences: dict = field(default_factory=dict)
    limits: dict = field(default_factory=dict)
    targets: dict = field(default_factory=dict)
    verdicts: dict = field(default_factory=dict)
    status: str = PASS
    notes: list = field(default_factory=list)

    @property
    def passed(self):
        return self.status == PASS

    def to_dict(self):
        return {'name': self.name, 'radii': self.radii, 'sequences': self.sequences,
                'limits': self.limits, 'targets': self.targets, 'verdicts': self.verdicts,
                'status': self.status, 'passed': self.passed, 'notes': self.notes}


def _finish(report):
    report.status = PASS if all(v == PASS for v in report.verdicts.values()) else FAIL
    return report


def _judge_limits(report, branch):
    for key, seq in report.sequences.items():
        limit = extrapolate(report.radii, seq, branch)
        report.limits[key] = limit
        report.verdicts[key] = PASS if abs(limit - report.targets[key]) <= LIMIT_TOL else FAIL


def verify_geometric_limits(m, kappa0, alpha, radii=None, theta=0.7):
    """(|z| log(1/|z|)) lambda, z Gamma and z^2 S along the ray arg z = theta"""
    radii = limit_ladder() if radii is None else np.asarray(radii, dtype=float)
    if not kappa0 < 0:
        raise ParameterError(f"kappa(0) must be negative, got {kappa0}")
    branch = CRITICAL if alpha == 1 else SUBCRITICAL
    z = radii * np.exp(1j * theta)
    report = LimitReport('geometric', radii.tolist())
    report.sequences['a'] = [float(r * _log_inv(r) * m.lam(zz)) for r, zz in zip(radii, z)]
    report.sequences['b'] = [complex(zz * metrics.connection(m, zz)) for zz in z]
    report.sequences['c'] = [complex(zz ** 2 * metrics.schwarzian(m, zz)) for zz in z]
    report.targets = {'a': 1.0 / np.sqrt(-kappa0) if alpha == 1 else 0.0,
                      'b': -float(alpha), 'c': alpha * (2.0 - alpha) / 2.0}
    _judge_limits(report, branch)
    return _finish(report)


def verify_yau_ratios(m, radii=None, theta=0.7, reference=None):
    """Ratios of lambda, Gamma and S against the punctured-disk metric of curvature -4"""
    radii = limit_ladder() if radii is None else np.asarray(radii, dtype=float)
    report = LimitReport('yau', radii.tolist())
    if reference is None:
        reference = families.hyperbolic_punctured_disk(4.0).density()

    deep_radii = 10.0 ** -np.arange(1, 21, dtype=float)
    lengths = metrics.completeness_probe(m, 0.5 * np.exp(1j * theta), deep_radii)
    completeness = metrics.completeness_verdict(lengths, deep_radii)
    kappa_inner = float(metrics.curvature(m, radii[-1] * np.exp(1j * theta)))
    report.notes.append(f'completeness: {completeness}; curvature at innermost radius {kappa_inner:.6g}')
    if completeness != 'divergent' or abs(kappa_inner + 4.0) > LIMIT_TOL:
        report.status = PRECONDITION_FAILED
        return report

    z = radii * np.exp(1j * theta)
    report.sequences['lambda'] = [float(m.lam(zz) / reference.lam(zz)) for zz in z]
    report.sequences['gamma'] = [complex(metrics.connection(m, zz) / metrics.connection(reference, zz)) for zz in z]
    report.sequences['schwarzian'] = [complex(metrics.schwarzian(m, zz) / metrics.schwarzian(reference, zz))
                                      for zz in z]
    report.targets = {'lambda': 1.0, 'gamma': 1.0, 'schwarzian': 1.0}
    _judge_limits(report, CRITICAL)
    return _finish(report)


def _critical_w(u):
    return lambda z: u(z) + np.log(np.abs(z)) + np.log(_log_inv(np.abs(z)))


def _settling(values, slack):
    """True when the last entries never increase (beyond slack)"""
    tail = np.asarray(values, dtype=float)
    return bool(np.all(np.diff(tail) <= slack))


def wachstum_check(u, kappa, radii=None, n_theta=64):
    """B(r) = max_{|z|=r} |-kappa e^{2w} - 1| log(1/r); bounded when increments shrink and the limit is finite"""
    radii = rate_ladder(8) if radii is None else np.asarray(radii, dtype=float)
    w = _critical_w(u)

    def defect(z):
        return np.abs(-np.asarray(kappa(z), dtype=float) * np.exp(2.0 * w(z)) - 1.0)

    B = np.array([max_on_circle(defect, r, max(n_theta, 64)) * _log_inv(r) for r in radii])
    report = LimitReport('wachstum', radii.tolist())
    report.sequences['B'] = B.tolist()
    increments = np.abs(np.diff(B))[-3:]
    limit = extrapolate_critical(radii, B)
    report.limits['B'] = limit
    report.verdicts['B'] = PASS if _settling(increments, 1e-9) and np.isfinite(limit) and abs(limit) < 1e6 else FAIL
    report.notes.append(f'last increments {increments.tolist()}')
    return _finish(report)


def critical_continuity_check(u, kappa, radii=None, n_theta=64):
    """Circle oscillation of w and the gap to -log sqrt(-kappa), with the extrapolated w(0)"""
    radii = rate_ladder(8) if radii is None else np.asarray(radii, dtype=float)
    w = _critical_w(u)
    means, oscillations, gaps, targets = [], [], [], []
    for r in radii:
        pts = grd.circle_points(r, n_theta)
        values = w(pts)
        mean = float(np.mean(values))
        target = -0.5 * np.log(-np.asarray(kappa(pts), dtype=float))
        means.append(mean)
        oscillations.append(float(np.max(np.abs(values - mean))))
        gaps.append(float(np.mean(np.abs(values - target))))
        targets.append(float(np.mean(target)))

    report = LimitReport('continuity', radii.tolist())
    report.sequences = {'w_mean': means, 'oscillation': oscillations, 'gap': gaps}
    report.limits['w'] = extrapolate_critical(radii, means)
    report.limits['gap'] = extrapolate_critical(radii, gaps)
    report.targets['w'] = targets[-1]
    report.verdicts['gap'] = PASS if _settling(gaps[-4:], 1e-12) and report.limits['gap'] <= LIMIT_TOL else FAIL
    report.verdicts['oscillation'] = PASS if _settling(oscillations[-4:], 1e-9) else FAIL
    return _finish(report)
