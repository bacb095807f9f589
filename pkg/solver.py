"""Dirichlet problems for Delta u = -kappa e^{2u} on annuli.

The 2-D solver works in the log-polar scaled system u_ss + u_tt = F(u) with
F(u) = -kappa |z|^2 e^{2u}, which is the original equation multiplied by
|z|^2. Iterates decrease from a discrete supersolution; each step solves

    (L - C_k) u_{k+1} = F(u_k) - C_k u_k,   C_k = shift * F'(u_k),

so shift = 1 is Newton's method and any shift >= 1 keeps the update
order-preserving between the sub- and supersolution.
"""
import logging
from dataclasses import dataclass, field, asdict

import numpy as np
import scipy.sparse as sp
from scipy.interpolate import CubicSpline
from scipy.linalg import solve_banded
from scipy.sparse.linalg import splu

import asymptotics
import families
import grid as grd
from config.config import DEFAULT_MAX_ITERS, DEFAULT_TOL
from errors import (BracketViolationError, DomainError, EvaluationError, GridSizeError,
                    NewtonDivergenceError, NonConvergenceError, ParameterError)

logger = logging.getLogger(__name__)

# Largest order used for the initial barrier pair
ALPHA_CLAMP = (-3.0, 0.99)
HYPOTHESIS_TOL = 1e-6
EXP_CAP = 700.0


@dataclass(frozen=True)
class SolveConfig:
    max_iters: int = DEFAULT_MAX_ITERS
    tol: float = DEFAULT_TOL
    linearization_shift: float = 1.0
    verbosity: bool = False

    def __post_init__(self):
        if not self.tol > 0:
            raise ParameterError(f"tol must be positive, got {self.tol}")
        if self.max_iters < 1:
            raise ParameterError(f"max_iters must be >= 1, got {self.max_iters}")
        if not self.linearization_shift > 0:
            raise ParameterError(f"linearization_shift must be positive, got {self.linearization_shift}")


@dataclass(frozen=True)
class IterationRecord:
    """One monotone step; min_gap_to_subsolution = min(u - sub), max_gap_to_supersolution = max(u - super)"""
    iter: int
    residual_supnorm: float
    step_supnorm: float
    min_gap_to_subsolution: float
    max_gap_to_supersolution: float


@dataclass
class IterationTrace:
    records: list = field(default_factory=list)
    converged: bool = False
    alpha_boundary: float = None
    supersolution_shift: float = None
    subsolution_radius: float = None
    subsolution_discrete: bool = None
    ahlfors: dict = field(default_factory=dict)
    richardson_correction: float = None

    @property
    def iterations(self):
        return len(self.records)

    @property
    def final_residual(self):
        return self.records[-1].residual_supnorm if self.records else None

    def to_dict(self):
        return {
            'converged': self.converged,
            'iterations': self.iterations,
            'alpha_boundary': self.alpha_boundary,
            'supersolution_shift': self.supersolution_shift,
            'subsolution_radius': self.subsolution_radius,
            'subsolution_discrete': self.subsolution_discrete,
            'ahlfors': dict(self.ahlfors),
            'richardson_correction': self.richardson_correction,
            'records': [asdict(r) for r in self.records],
        }


def _ring(values, n):
    ring = np.array(np.broadcast_to(np.asarray(values, dtype=float), (n,)))
    if not np.all(np.isfinite(ring)):
        raise EvaluationError("boundary values must be finite")
    return ring


def boundary_from(u, grid):
    """Dirichlet data sampled from a callable on both rings"""
    return u(grid.z[0]), u(grid.z[-1])


def _scaled_kappa(kappa, grid):
    """c = -kappa |z|^2 at every node; requires kappa < 0"""
    k = np.asarray(kappa(grid.z), dtype=float)
    if not np.all(np.isfinite(k)):
        raise EvaluationError("curvature is not finite on the grid")
    if np.any(k >= 0):
        raise DomainError("curvature must be strictly negative on the annulus")
    return -k * np.exp(2.0 * grid.s)[:, None]


def _bounds(kappa, grid):
    """(A, a) with -a <= kappa <= -A at every node"""
    k = -np.asarray(kappa(grid.z), dtype=float)
    return float(np.min(k)), float(np.max(k))


def _scaled_laplacian(u, grid):
    """u_ss + u_tt on interior rings of a full nodal array"""
    inner = u[1:-1]
    u_ss = (u[2:] - 2.0 * inner + u[:-2]) / grid.ds ** 2
    u_tt = (np.roll(inner, -1, axis=1) - 2.0 * inner + np.roll(inner, 1, axis=1)) / grid.dtheta ** 2
    return u_ss + u_tt


def _boundary_order(grid, inner, outer):
    slope = (np.mean(outer) - np.mean(inner)) / (grid.s[-1] - grid.s[0])
    return float(np.clip(-slope, *ALPHA_CLAMP))


def _initial_supersolution(grid, c, inner, outer, A, alpha_b):
    base = families.supersolution_family(alpha_b, A).u(grid.z)
    shift = max(0.0, float(np.max(inner - base[0])), float(np.max(outer - base[-1])))
    sup = base + shift
    lap = _scaled_laplacian(sup, grid)
    f = c[1:-1] * np.exp(2.0 * sup[1:-1])
    pos = lap > 0
    delta = max(0.0, 0.5 * float(np.max(np.log(lap[pos] / f[pos])))) if np.any(pos) else 0.0
    return sup + delta, shift + delta


def _initial_subsolution(grid, c, inner, outer, a, alpha_b):
    R = 2.0
    for _ in range(64):
        sub = families.subsolution_family(alpha_b, a, R).u(grid.z)
        if np.all(sub[0] <= inner) and np.all(sub[-1] <= outer):
            break
        R *= 2.0
    else:
        raise NonConvergenceError("no rescaled subsolution lies below the boundary data")
    lap = _scaled_laplacian(sub, grid)
    f = c[1:-1] * np.exp(2.0 * sub[1:-1])
    if np.any(lap <= 0):
        logger.debug("Rescaled subsolution is not a discrete subsolution; lower bracket is diagnostic only")
        return sub, R, False
    delta = max(0.0, -0.5 * float(np.min(np.log(lap / f))))
    return sub - delta, R, True


def ahlfors_bound(grid, A):
    """Maximal solution -log(sqrt(A) |z| log(1/|z|)) of curvature -A at every node"""
    r = np.abs(grid.z)
    return -0.5 * np.log(A) - np.log(r * np.log(1.0 / r))


def _ahlfors_report(u, grid, inner, outer, A, tol):
    bound = ahlfors_bound(grid, A)
    applicable = bool(np.all(inner <= bound[0] + tol) and np.all(outer <= bound[-1] + tol))
    excess = float(np.max(u - bound))
    return {'A': A, 'applicable': applicable, 'excess': excess, 'holds': excess <= 10.0 * tol}


def solve_dirichlet_annulus(kappa, boundary, grid, cfg=None):
    """Monotone iteration for Delta u = -kappa e^{2u} with Dirichlet data on both rings

    Args:
        kappa: CurvatureField (or callable) strictly negative on the annulus
        boundary: (inner, outer) ring values, arrays of length n_angular or scalars
        grid: AnnularGrid
        cfg: SolveConfig

    Returns:
        (GridField, IterationTrace)
    """
    cfg = cfg or SolveConfig()
    c = _scaled_kappa(kappa, grid)
    inner, outer = (_ring(b, grid.n_angular) for b in boundary)
    A, a = _bounds(kappa, grid)

    trace = IterationTrace()
    trace.alpha_boundary = _boundary_order(grid, inner, outer)
    sup, trace.supersolution_shift = _initial_supersolution(grid, c, inner, outer, A, trace.alpha_boundary)
    sub, trace.subsolution_radius, trace.subsolution_discrete = _initial_subsolution(
        grid, c, inner, outer, a, trace.alpha_boundary)

    op = grd.interior_operator(grid)
    bc = grd.boundary_contribution(grid, inner, outer)
    ci = c[1:-1].ravel()
    u = sup.copy()
    u[0], u[-1] = inner, outer
    ui = u[1:-1].ravel()
    emit = logger.info if cfg.verbosity else logger.debug

    for k in range(1, cfg.max_iters + 1):
        f = ci * np.exp(2.0 * ui)
        shift = cfg.linearization_shift * 2.0 * f
        mat = (op - sp.diags(shift)).tocsc()
        rhs = f - shift * ui - bc
        lu = splu(mat)
        new = lu.solve(rhs)
        new += lu.solve(rhs - mat @ new)

        rise = float(np.max(new - ui))
        step = float(np.max(np.abs(new - ui)))
        ui = new
        u[1:-1] = ui.reshape(grid.n_radial - 2, grid.n_angular)
        residual = float(np.max(np.abs(op @ ui + bc - ci * np.exp(2.0 * ui))))
        below = float(np.min(u - sub))
        above = float(np.max(u - sup))
        trace.records.append(IterationRecord(k, residual, step, below, above))
        emit(f"iter {k}: residual {residual:.3e}, step {step:.3e}")

        if not np.isfinite(residual):
            raise NonConvergenceError(f"iteration {k} produced non-finite values")
        if rise > cfg.tol or above > cfg.tol or (trace.subsolution_discrete and below < -cfg.tol):
            raise BracketViolationError(
                f"monotonicity broken at iteration {k} (rise {rise:.3e}, "
                f"below sub {below:.3e}, above super {above:.3e}); increase linearization_shift")
        if step <= cfg.tol and residual <= cfg.tol:
            trace.converged = True
            break
    else:
        raise NonConvergenceError(f"no convergence after {cfg.max_iters} iterations "
                                  f"(residual {trace.final_residual:.3e})")

    trace.ahlfors = _ahlfors_report(u, grid, inner, outer, A, cfg.tol)
    logger.info(f"Converged in {trace.iterations} iterations, residual {trace.final_residual:.3e}")
    return grd.GridField(u, grid), trace


def solve_extrapolated(kappa, boundary, grid, cfg=None):
    """Annulus solve with one Richardson step against every other ring and angle

    The five-point error expands as ds^2 e_s + dtheta^2 e_theta + O(h^4), so
    (4 u_h - u_2h) / 3 is fourth order on the shared nodes. The correction
    reaches the other nodes by cubic splines, periodic in theta.

    Returns:
        (GridField, IterationTrace of the fine solve)
    """
    if grid.n_radial % 2 == 0 or grid.n_angular % 4 or grid.n_angular < 16:
        raise GridSizeError(f"Richardson needs odd n_radial and n_angular a multiple of 4 (>= 16), "
                            f"got {grid.n_radial}x{grid.n_angular}")
    fine, trace = solve_dirichlet_annulus(kappa, boundary, grid, cfg)
    coarse_grid = grd.build_grid(grid.r_min, grid.r_max, (grid.n_radial + 1) // 2, grid.n_angular // 2)
    inner, outer = (_ring(b, grid.n_angular)[::2] for b in boundary)
    coarse, _ = solve_dirichlet_annulus(kappa, (inner, outer), coarse_grid, cfg)

    shared = (fine.values[::2, ::2] - coarse.values) / 3.0
    closed = np.concatenate([shared, shared[:, :1]], axis=1)
    theta = np.append(coarse_grid.theta, 2.0 * np.pi)
    along = CubicSpline(theta, closed, axis=1, bc_type='periodic')(grid.theta)
    correction = CubicSpline(coarse_grid.s, along, axis=0)(grid.s)
    trace.richardson_correction = float(np.max(np.abs(correction)))
    logger.info(f"Richardson correction {trace.richardson_correction:.3e}")
    return grd.GridField(fine.values + correction, grid), trace


def refinement_study(entry, r_min, r_max, sizes=((17, 16), (33, 32), (65, 64)), cfg=None):
    """Sup-norm errors against a closed form over successive grid halvings"""
    rows = []
    for n_radial, n_angular in sizes:
        g = grd.build_grid(r_min, r_max, n_radial, n_angular)
        solution, trace = solve_dirichlet_annulus(entry.kappa, boundary_from(entry.u, g), g, cfg)
        error = float(np.max(np.abs(solution.values - entry.u(g.z))))
        rows.append({'n_radial': n_radial, 'n_angular': n_angular, 'error': error,
                     'iterations': trace.iterations})
    ratios = [prev['error'] / cur['error'] if cur['error'] > 0 else float('inf')
              for prev, cur in zip(rows[:-1], rows[1:])]
    return rows, ratios


# Radial problem

@dataclass(frozen=True)
class RadialProfile:
    r: np.ndarray
    u: np.ndarray
    residual: float
    iterations: int
    method: str

    @property
    def s(self):
        return np.log(self.r)

    def as_callable(self):
        spline = CubicSpline(self.s, self.u)
        return lambda z: spline(np.log(np.abs(np.asarray(z))))

    def rows(self):
        return [(float(r), float(u)) for r, u in zip(self.r, self.u)]


def _numerov_residual(u, c, h, bc):
    full = np.concatenate([[bc[0]], u, [bc[1]]])
    g = c * np.exp(2.0 * full)
    return full[2:] - 2.0 * full[1:-1] + full[:-2] - h ** 2 / 12.0 * (g[2:] + 10.0 * g[1:-1] + g[:-2])


def _numerov_step(u, c, h, bc, slope):
    """Solve the tridiagonal linearization with g' replaced by `slope` (per node, full length)"""
    m = len(u)
    w = h ** 2 / 12.0
    ab = np.zeros((3, m))
    ab[0, 1:] = 1.0 - w * slope[2:-1]
    ab[1] = -2.0 - 10.0 * w * slope[1:-1]
    ab[2, :-1] = 1.0 - w * slope[1:-2]
    return solve_banded((1, 1), ab, -_numerov_residual(u, c, h, bc))


def monotone_fallback(u, c, h, bc, tol, max_iters=5000):
    """Fixed-point iteration with a uniform shift 2 max g; slow but does not overshoot

    Stops when the residual is below tol * h^2, or when it stalls below tol
    (the rounding floor).
    """
    prev = np.inf
    for k in range(1, max_iters + 1):
        full = np.concatenate([[bc[0]], u, [bc[1]]])
        g = c * np.exp(2.0 * full)
        slope = np.full_like(full, 2.0 * np.max(g))
        u = u + _numerov_step(u, c, h, bc, slope)
        res = float(np.max(np.abs(_numerov_residual(u, c, h, bc))))
        if not np.isfinite(res):
            break
        if res <= tol * h ** 2 or (res <= tol and res >= prev):
            return u, res, k
        prev = res
    raise NewtonDivergenceError("damped Newton and the monotone fallback both failed")


def solve_radial(kappa, r_in, r_out, bc, n=2049, tol=1e-10, max_iters=50):
    """Radial solution of u_ss = -kappa(r) r^2 e^{2u}, s = log r

    Uses the fourth-order three-point compact scheme
    u_{i+1} - 2u_i + u_{i-1} = h^2/12 (g_{i+1} + 10 g_i + g_{i-1})
    solved by damped Newton on the tridiagonal system. The residual carries
    a factor h^2, so Newton runs until it is below tol * h^2; a line search
    that stalls below tol has reached the rounding floor and is accepted.

    Args:
        kappa: radial curvature callable, strictly negative on [r_in, r_out]
        r_in, r_out: 0 < r_in < r_out < 1
        bc: (u(r_in), u(r_out))
        n: number of nodes including both ends

    Returns:
        RadialProfile
    """
    if not (0.0 < r_in < r_out < 1.0):
        raise DomainError(f"need 0 < r_in < r_out < 1, got {r_in}, {r_out}")
    if n < 5:
        raise GridSizeError(f"radial solve needs at least 5 nodes, got {n}")
    bc = (float(bc[0]), float(bc[1]))
    if not all(np.isfinite(bc)):
        raise EvaluationError("boundary values must be finite")

    s = np.linspace(np.log(r_in), np.log(r_out), n)
    r = np.exp(s)
    k = np.asarray(kappa(r), dtype=float)
    if np.any(k >= 0) or not np.all(np.isfinite(k)):
        raise DomainError("curvature must be strictly negative on [r_in, r_out]")
    c = -k * r ** 2
    h = s[1] - s[0]
    u = np.linspace(bc[0], bc[1], n)[1:-1]
    target = tol * h ** 2

    norm = float(np.max(np.abs(_numerov_residual(u, c, h, bc))))
    for it in range(1, max_iters + 1):
        full = np.concatenate([[bc[0]], u, [bc[1]]])
        delta = _numerov_step(u, c, h, bc, 2.0 * c * np.exp(2.0 * full))
        lam = 1.0
        while lam > 1e-4:
            trial = u + lam * delta
            trial_norm = float(np.max(np.abs(_numerov_residual(trial, c, h, bc))))
            if np.isfinite(trial_norm) and trial_norm <= (1.0 - 0.5 * lam) * norm:
                break
            lam *= 0.5
        else:
            if norm <= tol:
                logger.debug(f"radial newton stalled at residual {norm:.3e}; rounding floor reached")
                return RadialProfile(r, np.concatenate([[bc[0]], u, [bc[1]]]), norm, it - 1, 'newton')
            logger.warning("Damped Newton stalled; switching to monotone iteration")
            break
        u, norm = trial, trial_norm
        logger.debug(f"radial newton {it}: residual {norm:.3e}, damping {lam:g}")
        if norm <= target:
            return RadialProfile(r, np.concatenate([[bc[0]], u, [bc[1]]]), norm, it, 'newton')
    if norm <= tol:
        return RadialProfile(r, np.concatenate([[bc[0]], u, [bc[1]]]), norm, max_iters, 'newton')

    u, norm, its = monotone_fallback(u, c, h, bc, tol)
    return RadialProfile(r, np.concatenate([[bc[0]], u, [bc[1]]]), norm, its, 'monotone')


# Extended maximum principle

@dataclass(frozen=True)
class MaxPrincipleReport:
    hypotheses: dict
    min_gap: float
    conclusion_holds: bool

    @property
    def failing(self):
        return [name for name, item in self.hypotheses.items() if not item['passed']]

    def to_dict(self):
        return {'hypotheses': self.hypotheses, 'min_gap': self.min_gap,
                'conclusion_holds': self.conclusion_holds, 'failing': self.failing}


def _slack(u, z, rhs):
    """Per-node tolerance; |u| enters as its max over the node's ring, which bounds the stencil's rounding"""
    scale = np.max(np.abs(u), axis=-1, keepdims=True) if np.ndim(u) > 1 else np.abs(u)
    return HYPOTHESIS_TOL * (1.0 + np.abs(rhs) + scale / np.abs(z) ** 2)


def _source(k, u):
    """-kappa e^{2u} with the exponent capped below overflow"""
    return -k * np.exp(np.minimum(2.0 * u, EXP_CAP))


def check_max_principle(u1, u2, kappa, grid, outer_radius=None, radii=None):
    """Numeric verdicts on the four comparison hypotheses and the conclusion u1 <= u2

    Hypotheses: (i) u2 subharmonic supersolution, (ii) u1 subsolution,
    (iii) u1 <= u2 on the outer circle, (iv) order(u1) <= order(u2) < inf.
    """
    z = grid.z
    r_out = grid.r_max if outer_radius is None else float(outer_radius)
    k = np.asarray(kappa(z), dtype=float)

    v2 = u2(z)
    lap2 = grd.laplacian_at(u2, z)
    rhs2 = _source(k, v2)
    slack2 = _slack(v2, z, rhs2)
    subharmonic = float(np.min(lap2 + slack2))
    super_margin = float(np.min(rhs2 - lap2 + slack2))

    v1 = u1(z)
    lap1 = grd.laplacian_at(u1, z)
    rhs1 = _source(k, v1)
    sub_margin = float(np.min(lap1 - rhs1 + _slack(v1, z, rhs1)))

    ring = grd.circle_points(r_out, grid.n_angular)
    ring_gap = float(np.min(u2(ring) - u1(ring)))

    radii = asymptotics.default_ladder() if radii is None else radii
    o1 = asymptotics.order_details(u1, radii)
    o2 = asymptotics.order_details(u2, radii)
    finite = o2.finite
    spread = 3.0 * max(o1.alpha_stderr, o2.alpha_stderr) + 1e-6
    order_ok = bool(finite and o1.alpha_hat <= o2.alpha_hat + spread)

    hypotheses = {
        'i': {'passed': subharmonic >= 0 and super_margin >= 0,
              'subharmonic_margin': subharmonic, 'supersolution_margin': super_margin},
        'ii': {'passed': sub_margin >= 0, 'subsolution_margin': sub_margin},
        'iii': {'passed': ring_gap >= -1e-9, 'boundary_gap': ring_gap, 'radius': r_out},
        'iv': {'passed': order_ok, 'alpha_u1': o1.alpha_hat, 'alpha_u2': o2.alpha_hat if finite else None,
               'u2_order_finite': finite},
    }
    min_gap = float(np.min(v2 - v1))
    report = MaxPrincipleReport(hypotheses, min_gap, min_gap >= -1e-9)
    logger.info(f"Max principle: failing {report.failing or 'none'}, min gap {min_gap:.6g}")
    return report
