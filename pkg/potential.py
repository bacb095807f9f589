"""Logarithmic Newton potentials with singular weights at the origin.

    omega(z) = (1/2pi) iint_{K_r} log|z - xi| F(xi) dsigma,   F = q * W(|xi|)

with W(rho) = rho^{-2 alpha} ('power') or 1/(rho^2 log(1/rho)^2) ('log2').

For z != 0 the disk K_r is split into a near disk D around z (radius
delta = min(|z|, r - |z|)/2, local polar coordinates about z) and the rest
(polar coordinates about 0, the arc inside D removed ring by ring). The ring
integrals run over three radial pieces: a graded inner piece absorbing the
weight at 0, a band through D in the substitution rho = |z| - delta cos(tau),
and a log-spaced outer piece. Each quantity is refined by doubling the node
counts until two levels agree.
"""
import logging
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import roots_jacobi, roots_legendre

import asymptotics
import grid as grd
from config.config import QUAD_NODE_CAP, QUAD_TOL, SEED
from errors import (DomainError, EvaluationError, HolderExponentError, ParameterError,
                    QuadratureBudgetError)

logger = logging.getLogger(__name__)

POWER = 'power'
LOG2 = 'log2'
N_START = 16
BOUNDARY_RADIUS = 3.0


@dataclass(frozen=True)
class PotentialSpec:
    """Density q(xi) W(|xi|) on K_r; q is extended by zero outside K_r"""
    q: Callable
    weight: str = POWER
    alpha: float = 0.0
    r: float = 1.0
    holder: float = 1.0

    def __post_init__(self):
        if self.weight not in (POWER, LOG2):
            raise ParameterError(f"weight must be '{POWER}' or '{LOG2}', got {self.weight!r}")
        if not self.r > 0:
            raise DomainError(f"radius must be positive, got {self.r}")
        if self.weight == POWER:
            if not self.alpha < 1:
                raise DomainError(f"power weight needs alpha < 1, got {self.alpha}")
            if self.r > 1:
                raise DomainError(f"power weight needs r <= 1, got {self.r}")
        elif not self.r < 1:
            raise DomainError(f"log2 weight needs r < 1, got {self.r}")
        if not 0 < self.holder <= 1:
            raise HolderExponentError(f"Hoelder exponent must lie in (0, 1], got {self.holder}")
        probe = self.r * np.sqrt(np.linspace(0.0, 0.999, 16))[:, None] * np.exp(2j * np.pi * np.arange(8) / 8)
        if not np.all(np.isfinite(np.asarray(self.q(probe), dtype=float))):
            raise EvaluationError("q is not bounded on K_r")

    def measure(self, rho):
        """W(rho) * rho, the radial density of the polar area element"""
        rho = np.asarray(rho, dtype=float)
        if self.weight == POWER:
            return rho ** (1.0 - 2.0 * self.alpha)
        return 1.0 / (rho * np.log(1.0 / rho) ** 2)

    def density(self, xi):
        xi = np.asarray(xi, dtype=complex)
        rho = np.abs(xi)
        inside = rho < self.r
        safe = np.where(inside, rho, 0.5 * self.r)
        if self.weight == POWER:
            w = safe ** (-2.0 * self.alpha)
        else:
            w = 1.0 / (safe ** 2 * np.log(1.0 / safe) ** 2)
        return np.where(inside, np.asarray(self.q(xi), dtype=float) * w, 0.0)

    def record(self):
        return {'weight': self.weight, 'alpha': self.alpha, 'r': self.r, 'holder': self.holder}


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    est_error: float
    nodes_used: int

    def to_dict(self):
        return {'value': self.value, 'est_error': self.est_error, 'nodes_used': self.nodes_used}


def _legendre(n, a, b):
    x, w = roots_legendre(n)
    return 0.5 * (b - a) * x + 0.5 * (b + a), 0.5 * (b - a) * w


def _trapezoid(n, offset=0.0):
    return offset + 2.0 * np.pi * (np.arange(n) + 0.5) / n, np.full(n, 2.0 * np.pi / n)


def _graded_piece(spec, outer, n, singular_power):
    """Nodes on [0, outer] with the weight at 0 absorbed by a substitution"""
    if spec.weight == LOG2:
        t, wt = _legendre(n, 0.0, 1.0 / np.log(1.0 / outer))
        return np.exp(-1.0 / t), wt
    k = max(4.0, 4.0 / (2.0 - 2.0 * spec.alpha - singular_power))
    u, wu = _legendre(n, 0.0, 1.0)
    rho = outer * u ** k
    return rho, spec.measure(rho) * k * outer * u ** (k - 1.0) * wu


def _log_piece(spec, lo, hi, n):
    sigma, ws = _legendre(n, np.log(lo), np.log(hi))
    rho = np.exp(sigma)
    return rho, spec.measure(rho) * rho * ws


def _band_piece(spec, center, delta, n):
    tau, wt = _legendre(n, 0.0, np.pi)
    rho = center - delta * np.cos(tau)
    return rho, spec.measure(rho) * delta * np.sin(tau) * wt


def _rings(spec, z, delta, n, hole=0.0, singular_power=0.0):
    """(xi, weight) arrays covering K_r minus the near disk (or minus K_hole when z = 0)"""
    zabs = abs(z)
    phi_z = np.angle(z)
    blocks = []
    if zabs == 0:
        if hole > 0:
            rho, w = _log_piece(spec, hole, spec.r, n)
        else:
            rho, w = _graded_piece(spec, spec.r, n, singular_power)
        blocks.append(('full', rho, w))
    else:
        blocks.append(('full',) + _graded_piece(spec, zabs - delta, n, singular_power))
        blocks.append(('band',) + _band_piece(spec, zabs, delta, n))
        blocks.append(('full',) + _log_piece(spec, zabs + delta, spec.r, n))

    xis, weights = [], []
    for kind, rho, w in blocks:
        if kind == 'full':
            phi, wp = _trapezoid(2 * n, phi_z)
            xis.append(rho[:, None] * np.exp(1j * phi)[None, :])
            weights.append(w[:, None] * wp[None, :])
        else:
            cosine = (rho ** 2 + zabs ** 2 - delta ** 2) / (2.0 * rho * zabs)
            half = np.arccos(np.clip(cosine, -1.0, 1.0))
            x, wx = roots_legendre(n)
            phi = phi_z + half[:, None] + (np.pi - half)[:, None] * (x[None, :] + 1.0)
            xis.append(rho[:, None] * np.exp(1j * phi))
            weights.append(w[:, None] * (np.pi - half)[:, None] * wx[None, :])
    return np.concatenate([x.ravel() for x in xis]), np.concatenate([w.ravel() for w in weights])


def _near_delta(spec, z):
    return 0.5 * min(abs(z), spec.r - abs(z))


def _component(x, j):
    return np.real(x) if j == 0 else np.imag(x)


def _unit(psi, j):
    return np.cos(psi) if j == 0 else np.sin(psi)


def _refine(label, evaluate):
    """Double node counts until two levels agree to QUAD_TOL"""
    n = N_START
    previous, used = evaluate(n)
    while True:
        n *= 2
        value, nodes = evaluate(n)
        used += nodes
        error = abs(value - previous)
        if error <= QUAD_TOL * max(1.0, abs(value)):
            logger.debug(f"{label}: {value:.12g} (error {error:.2e}, {used} nodes)")
            return QuadratureResult(float(value), float(error), int(used))
        if used > QUAD_NODE_CAP:
            raise QuadratureBudgetError(f"{label} needs more than {QUAD_NODE_CAP} nodes (last change {error:.2e})")
        previous = value


def _check_point(spec, z):
    z = complex(z)
    if abs(z) >= spec.r:
        raise DomainError(f"|z| = {abs(z):.6g} must be below r = {spec.r}")
    return z


def newton_potential(spec, z):
    """(1/2pi) iint_{K_r} log|z - xi| q(xi) W(|xi|) dsigma"""
    z = _check_point(spec, z)
    if z == 0 and spec.weight == LOG2:
        raise DomainError("the log2-weighted potential diverges at 0")
    delta = _near_delta(spec, z)

    def evaluate(n):
        xi, w = _rings(spec, z, delta, n)
        total = np.sum(np.log(np.abs(z - xi)) * spec.q(xi) * w)
        nodes = xi.size
        if z != 0:
            u, wu = _legendre(n, 0.0, 1.0)
            t = delta * u ** 3
            psi, wpsi = _trapezoid(2 * n)
            pts = z + t[:, None] * np.exp(1j * psi)[None, :]
            inner = np.log(t)[:, None] * spec.density(pts) * (t * 3.0 * delta * u ** 2 * wu)[:, None]
            total += np.sum(inner * wpsi[None, :])
            nodes += pts.size
        return total / (2.0 * np.pi), nodes

    return _refine('potential', evaluate)


def potential_gradient(spec, z, j):
    """d/dx_j of the potential through the kernel (z - xi)_j / |z - xi|^2"""
    z = _check_point(spec, z)
    if j not in (0, 1):
        raise ParameterError(f"axis must be 0 or 1, got {j}")
    if z == 0 and (spec.weight == LOG2 or spec.alpha >= 0.5):
        raise DomainError("the gradient is only defined away from 0 for this weight")
    delta = _near_delta(spec, z)

    def evaluate(n):
        xi, w = _rings(spec, z, delta, n, singular_power=1.0 if z == 0 else 0.0)
        diff = z - xi
        total = np.sum(_component(diff, j) / np.abs(diff) ** 2 * spec.q(xi) * w)
        nodes = xi.size
        if z != 0:
            t, wt = _legendre(n, 0.0, delta)
            psi, wpsi = _trapezoid(2 * n)
            pts = z + t[:, None] * np.exp(1j * psi)[None, :]
            total -= np.sum(spec.density(pts) * wt[:, None] * (_unit(psi, j) * wpsi)[None, :])
            nodes += pts.size
        return total / (2.0 * np.pi), nodes

    return _refine('gradient', evaluate)


def _exit_distance(z, psi, radius=BOUNDARY_RADIUS):
    """Distance from z to |xi| = radius along direction psi"""
    e = np.exp(1j * psi)
    b = np.real(np.conj(z) * e)
    return -b + np.sqrt(b ** 2 - abs(z) ** 2 + radius ** 2)


def potential_hessian(spec, z, l, j, holder=None):
    """d^2/dx_l dx_j of the potential by the compensated formula over K_3

    Four parts: the near disk with F(xi) - F(z) (Gauss-Jacobi in the radius
    for Hoelder exponent gamma), the far field against F, the far-field
    compensation -F(z) int (delta_lj - 2 e_l e_j) log(T/delta), and the
    boundary term over |xi| = 3.
    """
    z = _check_point(spec, z)
    if l not in (0, 1) or j not in (0, 1):
        raise ParameterError("axes must be 0 or 1")
    gamma = spec.holder if holder is None else float(holder)
    if not 0 < gamma <= 1:
        raise HolderExponentError(f"Hoelder exponent must lie in (0, 1], got {gamma}")
    if z == 0 and (spec.weight == LOG2 or spec.alpha > 0):
        raise DomainError("the Hessian at 0 needs a power weight with alpha <= 0")

    delta = 0.5 * spec.r if z == 0 else _near_delta(spec, z)
    f_z = float(spec.density(z))
    kron = 1.0 if l == j else 0.0

    def angular(psi):
        return kron - 2.0 * _unit(psi, l) * _unit(psi, j)

    def evaluate(n):
        xi, w = _rings(spec, z, delta, n, hole=delta if z == 0 else 0.0)
        x = z - xi
        ax2 = np.abs(x) ** 2
        far = np.sum((kron * ax2 - 2.0 * _component(x, l) * _component(x, j)) / ax2 ** 2 * spec.q(xi) * w)

        xg, wg = roots_jacobi(n, 0.0, gamma - 1.0)
        t = 0.5 * delta * (xg + 1.0)
        psi, wpsi = _trapezoid(2 * n)
        pts = z + t[:, None] * np.exp(1j * psi)[None, :]
        jump = (spec.density(pts) - f_z) / t[:, None] ** gamma
        near = (0.5 * delta) ** gamma * np.sum(wg[:, None] * jump * (angular(psi) * wpsi)[None, :])

        compensation = -f_z * np.sum(angular(psi) * np.log(_exit_distance(z, psi) / delta) * wpsi)

        phi, wphi = _trapezoid(2 * n)
        xi_b = BOUNDARY_RADIUS * np.exp(1j * phi)
        xb = z - xi_b
        boundary = -f_z * np.sum(_component(xb, j) / np.abs(xb) ** 2 * _unit(phi, l) * BOUNDARY_RADIUS * wphi)

        total = far + near + compensation + boundary
        return total / (2.0 * np.pi), xi.size + pts.size + 2 * phi.size

    return _refine('hessian', evaluate)


def gradient_cross_check(spec, z, j, h=1e-4):
    """Kernel gradient next to a central difference of the potential"""
    z = complex(z)
    step = h * (1.0 if j == 0 else 1j)
    kernel = potential_gradient(spec, z, j)
    fd = (newton_potential(spec, z + step).value - newton_potential(spec, z - step).value) / (2.0 * h)
    return {'kernel': kernel.value, 'finite_difference': fd, 'difference': abs(kernel.value - fd),
            'est_error': kernel.est_error, 'nodes_used': kernel.nodes_used}


@dataclass
class PoissonJensenSplit:
    """u = h + potential_part with h validated harmonic by the circle mean value property"""
    h: Callable
    potential_part: Callable
    order: float
    premise_ok: bool
    mean_value_error: float = None
    harmonic: bool = None

    def to_dict(self):
        return {'order': self.order, 'premise_ok': self.premise_ok,
                'mean_value_error': self.mean_value_error, 'harmonic': self.harmonic}


def _circle_pairs(r, count, rng):
    pairs = []
    while len(pairs) < count:
        c = r * np.sqrt(rng.uniform(0.05, 0.8)) * np.exp(1j * rng.uniform(0.0, 2.0 * np.pi))
        room = min(abs(c), r - abs(c))
        if room > 1e-3:
            pairs.append((c, rng.uniform(0.2, 0.8) * room))
    return pairs


def poisson_jensen_split(u, laplacian_density, r, n_pairs=30, n_points=32, tol=1e-4, seed=None):
    """Split u into a harmonic part and the logarithmic potential of its Laplacian

    Args:
        u: callable on K_r minus 0 with vanishing order at 0
        laplacian_density: PotentialSpec, or callable Delta u (taken with the power(0) weight)
        r: disk radius
    """
    spec = laplacian_density if isinstance(laplacian_density, PotentialSpec) \
        else PotentialSpec(q=laplacian_density, weight=POWER, alpha=0.0, r=r)

    def potential_part(z):
        z = np.asarray(z, dtype=complex)
        values = [newton_potential(spec, w).value for w in z.ravel()]
        return np.reshape(values, z.shape) if z.ndim else values[0]

    def h(z):
        return u(z) - potential_part(z)

    order, stderr = asymptotics.estimate_order(u)
    premise_ok = abs(order) <= max(1e-2, 3.0 * stderr)
    split = PoissonJensenSplit(h, potential_part, order, premise_ok)
    if not premise_ok:
        logger.warning(f"Poisson-Jensen premise fails: order {order:.4f} is not 0")
        return split

    rng = np.random.default_rng(SEED if seed is None else seed)
    worst = 0.0
    for center, radius in _circle_pairs(r, n_pairs, rng):
        ring = center + grd.circle_points(radius, n_points)
        worst = max(worst, float(abs(np.mean(h(ring)) - h(center))))
    split.mean_value_error = worst
    split.harmonic = worst <= tol
    logger.info(f"Poisson-Jensen split: mean value error {worst:.3e}")
    return split
