"""Conformal-metric calculus for densities lambda(z)|dz| on punctured disks and annuli."""
import logging
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.integrate import quad

import grid as grd
from errors import DomainError, EvaluationError

logger = logging.getLogger(__name__)

CLOSED_FORM = 'closed-form'
GRID = 'grid'


@dataclass(frozen=True)
class Annulus:
    """Domain descriptor {inner < |z| < outer}; inner = 0 is the punctured disk"""
    inner: float = 0.0
    outer: float = 1.0

    def contains(self, z):
        r = np.abs(np.asarray(z))
        return (r > self.inner) & (r < self.outer)

    def distance_to_boundary(self, z):
        r = np.abs(np.asarray(z))
        outer = self.outer - r
        if self.inner > 0:
            return np.minimum(outer, r - self.inner)
        return outer


PUNCTURED_DISK = Annulus(0.0, 1.0)


@dataclass(frozen=True)
class CurvatureField:
    """Curvature kappa(z) with optional declared bounds -a <= kappa <= -A"""
    kappa: Callable
    a: Optional[float] = None
    A: Optional[float] = None
    radial: bool = False
    label: str = ''

    def __call__(self, z):
        return self.kappa(z)

    @classmethod
    def constant(cls, value):
        value = float(value)
        bounds = (-value, -value) if value < 0 else (None, None)
        return cls(lambda z: np.full(np.shape(z), value), a=bounds[0], A=bounds[1],
                   radial=True, label=f'const:{value:g}')

    @property
    def strictly_negative(self):
        return self.A is not None and self.A > 0

    def check_bounds(self, z, tol=1e-12):
        """Raise DomainError when the declared bounds fail at any sampled point"""
        if not self.strictly_negative or self.a is None:
            raise DomainError(f"curvature {self.label or 'field'} is not declared strictly negative")
        values = np.asarray(self.kappa(z), dtype=float)
        if np.max(values) > -self.A + tol:
            raise DomainError(f"curvature exceeds -A = {-self.A} (max {np.max(values):.6g})")
        if np.min(values) < -self.a - tol:
            raise DomainError(f"curvature below -a = {-self.a} (min {np.min(values):.6g})")
        return True


@dataclass(frozen=True)
class MetricDensity:
    """Positive density lambda on a punctured disk or annulus, with u = log lambda"""
    lam: Callable
    domain: Annulus = PUNCTURED_DISK
    smoothness_tag: str = CLOSED_FORM
    log_lam: Optional[Callable] = None
    dlog: Optional[Callable] = None
    rho: Optional[Callable] = None
    field: Optional[grd.GridField] = field(default=None, repr=False)

    def u(self, z):
        if self.log_lam is not None:
            return self.log_lam(z)
        lam = np.asarray(self.lam(z), dtype=float)
        if np.any(lam <= 0):
            raise EvaluationError("density underflows to 0")
        return np.log(lam)

    def smooth_distance(self, z):
        if self.rho is not None:
            return self.rho(z)
        return np.maximum(self.domain.distance_to_boundary(z), 1e-12)


def density_from_u(u, domain=PUNCTURED_DISK, dlog=None, rho=None):
    """Metric e^u for a closed-form solution u"""
    return MetricDensity(lam=lambda z: np.exp(u(z)), domain=domain, log_lam=u, dlog=dlog, rho=rho)


def density_from_field(u_field):
    """Grid-backed metric e^u for a sampled or solved field"""
    interp = u_field.as_callable()
    g = u_field.grid
    return MetricDensity(lam=lambda z: np.exp(interp(z)), domain=Annulus(g.r_min, g.r_max),
                         smoothness_tag=GRID, log_lam=interp, field=u_field)


def _check_inside(m, z):
    if not np.all(m.domain.contains(z)):
        raise DomainError("point outside the metric's domain")


def curvature(m, z):
    """Gaussian curvature -Delta(log lambda)/lambda^2"""
    value, _ = _curvature_with_method(m, z)
    return value


def _curvature_with_method(m, z):
    _check_inside(m, z)
    if m.smoothness_tag == GRID:
        lap = grd.apply_laplacian(m.field).as_callable()(z)
        u = m.u(z)
        method = GRID
    else:
        u = m.u(z)
        lap = grd.laplacian_at(m.u, z, rho=m.smooth_distance(z))
        method = 'callable-5pt-richardson'
    lam2 = np.exp(2.0 * np.asarray(u, dtype=float))
    if np.any(lam2 == 0.0) or not np.all(np.isfinite(lam2)):
        raise EvaluationError("density underflows to 0 or overflows")
    kappa = -np.asarray(lap) / lam2
    return (float(kappa) if np.ndim(kappa) == 0 else kappa), method


def connection(m, z, analytic=True):
    """Connection 2 d/dz log lambda"""
    _check_inside(m, z)
    if analytic and m.dlog is not None:
        return 2.0 * m.dlog(z)
    return 2.0 * grd.dz(m.u, z, rho=m.smooth_distance(z))


def schwarzian(m, z, analytic=True):
    """Schwarzian dGamma/dz - Gamma^2/2"""
    _check_inside(m, z)
    rho = m.smooth_distance(z)
    if analytic and m.dlog is not None:
        gamma = lambda w: 2.0 * m.dlog(w)
        d_gamma = grd.dz(gamma, z, rho=rho)
    else:
        h = grd.default_step(np.asarray(z, dtype=complex), rho)
        gamma = lambda w: 2.0 * grd.dz(m.u, w, h=h)
        d_gamma = grd.dz(gamma, z, h=10.0 * h)
    return d_gamma - 0.5 * gamma(z) ** 2


def pullback(m, f, fprime, domain=PUNCTURED_DISK):
    """Pullback density lambda(f(z))|f'(z)| on the new domain"""

    def mapped(z):
        w = f(z)
        if not np.all(m.domain.contains(w)):
            raise EvaluationError("map leaves the metric's domain")
        d = fprime(z)
        if np.any(d == 0):
            raise EvaluationError("critical point of the map: f'(z) = 0")
        return w, d

    def lam(z):
        w, d = mapped(z)
        return m.lam(w) * np.abs(d)

    def log_lam(z):
        w, d = mapped(z)
        return m.u(w) + np.log(np.abs(d))

    return MetricDensity(lam=lam, domain=domain, log_lam=log_lam)


def liouville_metric(f, fprime, domain=PUNCTURED_DISK):
    """Density |f'|/(1 - |f|^2) of curvature -4 generated by a holomorphic map into the unit disk"""
    ring = 0.5 * (max(domain.inner, 0.0) + domain.outer) * np.exp(2j * np.pi * np.arange(16) / 16)
    if np.all(np.asarray(fprime(ring)) == 0):
        raise EvaluationError("f' vanishes identically; constant maps generate no metric")

    def checked(z):
        w = f(z)
        if np.any(np.abs(w) >= 1.0):
            raise EvaluationError("|f(z)| must stay below 1")
        d = fprime(z)
        if np.any(d == 0):
            raise EvaluationError("critical point of the map: f'(z) = 0")
        return w, d

    def lam(z):
        w, d = checked(z)
        return np.abs(d) / (1.0 - np.abs(w) ** 2)

    def log_lam(z):
        w, d = checked(z)
        return np.log(np.abs(d)) - np.log1p(-np.abs(w) ** 2)

    return MetricDensity(lam=lam, domain=domain, log_lam=log_lam)


def completeness_probe(m, z0, radii):
    """Cumulative radial path lengths from |z0| down to each radius

    The integral follows the ray through z0 only, so each entry is an upper
    bound on the metric distance.
    """
    radii = np.asarray(radii, dtype=float)
    r0 = abs(z0)
    if np.any(np.diff(radii) >= 0) or radii[0] >= r0 or radii[-1] <= 0:
        raise DomainError("radii must decrease from below |z0| towards 0")
    direction = np.exp(1j * np.angle(z0)) if z0 != 0 else 1.0

    def integrand(s):
        value = float(m.lam(np.exp(s) * direction)) * np.exp(s)
        if not np.isfinite(value):
            raise EvaluationError(f"density not finite at radius {np.exp(s):.3g}")
        return value

    bounds = np.concatenate([[np.log(r0)], np.log(radii)])
    pieces = []
    for hi, lo in zip(bounds[:-1], bounds[1:]):
        piece, _ = quad(integrand, lo, hi, limit=200, epsabs=1e-13, epsrel=1e-11)
        pieces.append(max(piece, 0.0))
    return np.cumsum(pieces)


def completeness_verdict(lengths, radii):
    """'divergent' when the per-unit-log-radius increments decay no faster than 1/log(1/r)

    Increments g_k of a locally complete metric behave like log(1/r)^-p with
    p <= 1; bounded distances decay like a power of r instead. The slope of
    log g against log log(1/r) over the inner half separates the two.
    """
    lengths = np.asarray(lengths, dtype=float)
    radii = np.asarray(radii, dtype=float)
    increments = np.diff(lengths) / np.abs(np.diff(np.log(radii)))
    ell = np.log(1.0 / np.sqrt(radii[1:] * radii[:-1]))
    half = len(increments) // 2
    g, t = increments[half:], ell[half:]
    if np.any(g <= 0):
        return 'bounded'
    slope = np.polyfit(np.log(t), np.log(g), 1)[0]
    return 'divergent' if slope >= -1.5 else 'bounded'


def metric_record(m, z):
    """JSON-ready record of all metric quantities at z, with the path each one took"""
    z = complex(z)
    kappa, method = _curvature_with_method(m, z)
    gamma = complex(connection(m, z))
    s = complex(schwarzian(m, z))
    analytic = m.dlog is not None
    return {
        'z_re': z.real,
        'z_im': z.imag,
        'lambda': float(m.lam(z)),
        'kappa': float(kappa),
        'gamma_re': gamma.real,
        'gamma_im': gamma.imag,
        's_re': s.real,
        's_im': s.imag,
        'method': method,
        'connection_method': 'analytic' if analytic else 'stencil',
        'schwarzian_method': 'analytic' if analytic else 'nested-stencil',
    }
