"""Catalog of closed-form solutions, sub/supersolutions and counterexamples.

Every entry carries u, its curvature, the declared order alpha and, where a
closed form exists, the remainder (v for alpha < 1, w for alpha = 1) with its
first and second z-derivatives. All formulas depend on |z| and Re z only.

Notation inside formulas: r = |z|, L = log(1/r), x = Re z.
"""
import logging
import re
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

import grid as grd
from config.config import RESIDUAL_SAMPLES, SEED
from errors import ParameterError, UnknownEntryError
from metrics import CurvatureField, density_from_u, pullback, PUNCTURED_DISK

logger = logging.getLogger(__name__)

VALIDATED = 'validated'
UNCHECKED = 'unchecked'
QUARANTINED = 'quarantined'

RESIDUAL_TOL = 1e-4
# sampled points keep the full Laplacian step: 0.1 rho/|z| >= 2e-2
SMOOTH_MARGIN = 0.2


def _r(z):
    return np.abs(z)


def _L(z):
    return -np.log(np.abs(z))


@dataclass(frozen=True)
class ClosedFormSolution:
    """A catalog entry: u solving Delta u = -kappa e^{2u} with declared order alpha"""
    id: str
    u: Callable
    kappa: CurvatureField
    alpha: float
    citation: str
    remainder: Optional[Callable] = None
    remainder_z: Optional[Callable] = None
    remainder_zz: Optional[Callable] = None
    rho: Optional[Callable] = None
    params: dict = field(default_factory=dict)
    status: str = UNCHECKED
    theorem_applies: bool = True
    notes: str = ''

    @property
    def branch(self):
        return 'critical' if self.alpha == 1 else 'subcritical'

    @property
    def has_closed_derivatives(self):
        return self.remainder_z is not None and self.remainder_zz is not None

    @property
    def label(self):
        if not self.params:
            return self.id
        args = ','.join(f'{k}={v:g}' for k, v in self.params.items())
        return f'{self.id}({args})'

    def u_z(self, z):
        """Closed-form d/dz u rebuilt from the remainder derivative"""
        if self.remainder_z is None:
            raise ParameterError(f"{self.label} has no closed-form remainder derivative")
        z = np.asarray(z, dtype=complex)
        if self.branch == 'critical':
            return -0.5 / z + 0.5 / (z * _L(z)) + self.remainder_z(z)
        return -0.5 * self.alpha / z + self.remainder_z(z)

    def density(self):
        dlog = self.u_z if self.remainder_z is not None else None
        return density_from_u(self.u, dlog=dlog, rho=self.rho)

    def record(self):
        return {
            'id': self.label,
            'alpha': self.alpha,
            'citation': self.citation,
            'has_closed_derivatives': self.has_closed_derivatives,
            'status': self.status,
        }


@dataclass(frozen=True)
class MaxPrinciplePair:
    """Candidate pair (u1 subsolution, u2 supersolution) for the extended comparison principle"""
    id: str
    u1: Callable
    u2: Callable
    kappa: CurvatureField
    citation: str
    expected_failure: Optional[str] = None
    alpha: Optional[float] = None
    outer_radius: float = 1.0
    status: str = UNCHECKED

    @property
    def label(self):
        return self.id

    def record(self):
        return {
            'id': self.id,
            'alpha': self.alpha,
            'citation': self.citation,
            'has_closed_derivatives': False,
            'status': self.status,
            'expected_failure': self.expected_failure,
        }


def hyperbolic_disk(A=4.0):
    """Hyperbolic metric of the unit disk with curvature -A"""
    A = float(A)
    if A <= 0:
        raise ParameterError(f"A must be positive, got {A}")
    c = np.log(2.0 / np.sqrt(A))

    def u(z):
        return c - np.log1p(-_r(z) ** 2)

    return ClosedFormSolution(
        id='hyperbolic-disk', u=u, kappa=CurvatureField.constant(-A), alpha=0.0,
        citation='hyperbolic metric of the unit disk, constant curvature -A',
        remainder=u,
        remainder_z=lambda z: np.conj(z) / (1.0 - _r(z) ** 2),
        remainder_zz=lambda z: np.conj(z) ** 2 / (1.0 - _r(z) ** 2) ** 2,
        params={'A': A},
    )


def hyperbolic_punctured_disk(A=4.0):
    """Maximal solution of Delta u = A e^{2u} on the punctured disk"""
    A = float(A)
    if A <= 0:
        raise ParameterError(f"A must be positive, got {A}")
    w0 = -0.5 * np.log(A)

    return ClosedFormSolution(
        id='hyperbolic-punctured-disk',
        u=lambda z: w0 - np.log(_r(z) * _L(z)),
        kappa=CurvatureField.constant(-A), alpha=1.0,
        citation='maximal solution on the punctured disk, complete metric of curvature -A',
        remainder=lambda z: np.full(np.shape(z), w0),
        remainder_z=lambda z: np.zeros(np.shape(z), dtype=complex),
        remainder_zz=lambda z: np.zeros(np.shape(z), dtype=complex),
        params={'A': A},
    )


def _power_remainder(alpha, scale):
    """v, v_z, v_zz of log(scale (1-alpha) / (1 - r^{2(1-alpha)}))"""
    beta = 1.0 - alpha
    c = np.log(scale * beta)

    def v(z):
        return c - np.log1p(-_r(z) ** (2 * beta))

    def v_z(z):
        p = _r(z) ** (2 * beta)
        return beta * np.conj(z) * _r(z) ** (-2 * alpha) / (1.0 - p)

    def v_zz(z):
        p = _r(z) ** (2 * beta)
        return beta * np.conj(z) ** 2 * _r(z) ** (-2 * alpha - 2) * (p - alpha) / (1.0 - p) ** 2

    return v, v_z, v_zz


def supersolution_family(alpha, A=4.0):
    """Explicit solution of order alpha < 1 with curvature -A, used as supersolution"""
    alpha, A = float(alpha), float(A)
    if alpha >= 1:
        raise ParameterError("alpha must be < 1; use hyperbolic_punctured_disk for alpha = 1")
    if A <= 0:
        raise ParameterError(f"A must be positive, got {A}")
    v, v_z, v_zz = _power_remainder(alpha, 2.0 / np.sqrt(A))

    return ClosedFormSolution(
        id='supersolution', u=lambda z: -alpha * np.log(_r(z)) + v(z),
        kappa=CurvatureField.constant(-A), alpha=alpha,
        citation='supersolution family of order alpha with curvature -A',
        remainder=v, remainder_z=v_z, remainder_zz=v_zz,
        params={'alpha': alpha, 'A': A},
    )


def subsolution_family(alpha, a=4.0, R=2.0):
    """Rescaled solution u(z/R) + log(1/R) of order alpha and curvature -a"""
    alpha, a, R = float(alpha), float(a), float(R)
    if R <= 1:
        raise ParameterError(f"R must exceed 1, got {R}")
    if alpha > 1:
        raise ParameterError(f"alpha must be <= 1, got {alpha}")
    base = hyperbolic_punctured_disk(a) if alpha == 1 else supersolution_family(alpha, a)
    log_r = np.log(R)

    def u(z):
        return base.u(np.asarray(z) / R) - log_r

    if alpha == 1:
        w0 = -0.5 * np.log(a)

        def rem(z):
            L = _L(z)
            return w0 - np.log((log_r + L) / L)

        def rem_z(z):
            L = _L(z)
            return (1.0 / (log_r + L) - 1.0 / L) / (2.0 * z)

        def rem_zz(z):
            L = _L(z)
            LR = log_r + L
            k = 1.0 / LR - 1.0 / L
            return (-k + 0.5 / LR ** 2 - 0.5 / L ** 2) / (2.0 * z ** 2)
    else:
        shift = (alpha - 1.0) * log_r

        def rem(z):
            return base.remainder(np.asarray(z) / R) + shift

        def rem_z(z):
            return base.remainder_z(np.asarray(z) / R) / R

        def rem_zz(z):
            return base.remainder_zz(np.asarray(z) / R) / R ** 2

    return ClosedFormSolution(
        id='subsolution', u=u, kappa=CurvatureField.constant(-a), alpha=alpha,
        citation='rescaled solution u(z/R) + log(1/R), subsolution for curvature above -a',
        remainder=rem, remainder_z=rem_z, remainder_zz=rem_zz,
        params={'alpha': alpha, 'a': a, 'R': R},
    )


def _nitsche_nonpositive(alpha):
    """alpha <= 0 branch: pullback of the order-alpha metric under z(2+z)/4"""
    beta = 1.0 - alpha
    c = np.log(beta * 4.0 ** (2.0 - alpha) / 2.0)
    top = 16.0 ** beta

    def g(z):
        return z * (2.0 + z)

    def v(z):
        z = np.asarray(z, dtype=complex)
        d = top - np.abs(g(z)) ** (2 * beta)
        return c + np.log(np.abs(1.0 + z)) - alpha * np.log(np.abs(2.0 + z)) - np.log(d)

    def parts(z):
        z = np.asarray(z, dtype=complex)
        gz = g(z)
        ag = np.abs(gz)
        gp = 2.0 + 2.0 * z
        d = top - ag ** (2 * beta)
        p_z = beta * ag ** (2 * beta - 2) * np.conj(gz) * gp
        p_zz = (beta * (beta - 1.0) * ag ** (2 * beta - 4) * np.conj(gz) ** 2 * gp ** 2
                + 2.0 * beta * ag ** (2 * beta - 2) * np.conj(gz))
        return z, d, p_z, p_zz

    def v_z(z):
        z, d, p_z, _ = parts(z)
        return 0.5 / (1.0 + z) - 0.5 * alpha / (2.0 + z) + p_z / d

    def v_zz(z):
        z, d, p_z, p_zz = parts(z)
        return -0.5 / (1.0 + z) ** 2 + 0.5 * alpha / (2.0 + z) ** 2 + p_zz / d + p_z ** 2 / d ** 2

    def rho(z):
        return np.minimum(1.0 - _r(z), np.abs(1.0 + np.asarray(z)))

    return v, v_z, v_zz, rho


@lru_cache(maxsize=64)
def nitsche_family(alpha):
    """Explicit solutions of Delta u = 4 e^{2u} of every order alpha <= 1"""
    alpha = float(alpha)
    if alpha > 1:
        raise ParameterError(f"alpha must be <= 1, got {alpha}")
    kappa = CurvatureField.constant(-4.0)
    citation = 'explicit three-branch family of order alpha with curvature -4'
    if alpha == 1:
        def w(z):
            L = _L(z)
            return np.log(0.5 * L / (1.0 + L))

        def w_z(z):
            L = _L(z)
            return -1.0 / (2.0 * z * L * (1.0 + L))

        def w_zz(z):
            L = _L(z)
            return (2.0 * L ** 2 - 1.0) / (4.0 * z ** 2 * L ** 2 * (1.0 + L) ** 2)

        return ClosedFormSolution(
            id='nitsche', u=lambda z: -np.log(2.0 * _r(z) * (1.0 + _L(z))), kappa=kappa, alpha=1.0,
            citation=citation, remainder=w, remainder_z=w_z, remainder_zz=w_zz,
            params={'alpha': alpha}, status=VALIDATED,
        )
    if alpha > 0:
        v, v_z, v_zz = _power_remainder(alpha, 1.0)
        return ClosedFormSolution(
            id='nitsche', u=lambda z: -alpha * np.log(_r(z)) + v(z), kappa=kappa, alpha=alpha,
            citation=citation, remainder=v, remainder_z=v_z, remainder_zz=v_zz,
            params={'alpha': alpha}, status=VALIDATED,
        )

    v, v_z, v_zz, rho = _nitsche_nonpositive(alpha)
    entry = ClosedFormSolution(
        id='nitsche', u=lambda z: -alpha * np.log(_r(z)) + v(z), kappa=kappa, alpha=alpha,
        citation=citation, remainder=v, remainder_z=v_z, remainder_zz=v_zz, rho=rho,
        params={'alpha': alpha},
        notes='limits at 0: v_z -> 1/2 - alpha/4, v_zz -> -1/2 + alpha/8',
    )
    return validate(entry)


def nitsche_pullback(alpha):
    """Density of the alpha <= 0 branch built by pulling back the order-alpha metric"""
    alpha = float(alpha)
    if alpha > 0:
        raise ParameterError("the pullback construction covers alpha <= 0 only")
    base = supersolution_family(alpha, 4.0).density()
    return pullback(base, lambda z: z * (2.0 + z) / 4.0, lambda z: (1.0 + z) / 2.0, domain=PUNCTURED_DISK)


def curvature_barrier(a=1.0, R=0.5):
    """Comparison metric exp(a/log(R/r)) / (r log(R/r)) of order 1 with kappa(0) = -1"""
    a, R = float(a), float(R)
    if a < 0 or R <= 0:
        raise ParameterError(f"need a >= 0 and R > 0, got a={a}, R={R}")
    log_r = np.log(R)

    def LR(z):
        return log_r + _L(z)

    def kappa(z):
        t = a / LR(z)
        return -(1.0 + 2.0 * t) * np.exp(-2.0 * t)

    def w(z):
        return a / LR(z) + np.log(_L(z) / LR(z))

    def w_z(z):
        lr, L = LR(z), _L(z)
        return (a / lr ** 2 + 1.0 / lr - 1.0 / L) / (2.0 * z)

    def w_zz(z):
        lr, L = LR(z), _L(z)
        k = a / lr ** 2 + 1.0 / lr - 1.0 / L
        return (-k + a / lr ** 3 + 0.5 / lr ** 2 - 0.5 / L ** 2) / (2.0 * z ** 2)

    bounds_r = 0.5 * min(R, 1.0)
    t_max = a / (log_r - np.log(bounds_r))
    A = (1.0 + 2.0 * t_max) * np.exp(-2.0 * t_max)
    outer = min(R, 1.0)

    return ClosedFormSolution(
        id='curvature-barrier',
        u=lambda z: a / LR(z) - np.log(_r(z) * LR(z)),
        kappa=CurvatureField(kappa, a=1.0, A=float(A), radial=True, label=f'barrier(a={a:g},R={R:g})'),
        alpha=1.0,
        citation='comparison metrics bounding the critical remainder, curvature -(1+2t)e^{-2t}, t = a/log(R/|z|)',
        remainder=w, remainder_z=w_z, remainder_zz=w_zz,
        rho=lambda z: np.maximum(outer - _r(z), 1e-12),
        params={'a': a, 'R': R},
        notes=f'curvature bounds hold on |z| <= {bounds_r:g}',
    )


# Counterexamples

def _maxprin_superharmonic():
    def u2(z):
        r = _r(z)
        return -(np.real(z) / r + 1.0) * r ** -1.5 * _L(z)

    return MaxPrinciplePair(
        id='maxprin-superharmonic',
        u1=lambda z: np.zeros(np.shape(z)), u2=u2,
        kappa=CurvatureField.constant(0.0),
        citation='comparison fails when u2 is not subharmonic: kappa = 0, u1 = 0, superharmonic spike u2',
        expected_failure='i', alpha=0.0, status=VALIDATED,
    )


def _maxprin_order_infty():
    def u1(z):
        return -1.0 - np.log(_r(z) * (1.0 + _L(z)))

    return MaxPrinciplePair(
        id='maxprin-order-infty',
        u1=u1, u2=lambda z: np.real(z) / _r(z) ** 2,
        kappa=CurvatureField.constant(-np.e ** 2),
        citation='comparison fails when u2 has infinite order: u2 = Re z/|z|^2, kappa = -e^2',
        expected_failure='iv', alpha=1.0,
    )


def theorem_pair(alpha=0.5, A=4.0, R=2.0):
    """Rescaled solution below the order-alpha solution, both of curvature -A; every hypothesis holds"""
    lower = subsolution_family(alpha, A, R)
    upper = hyperbolic_punctured_disk(A) if alpha == 1 else supersolution_family(alpha, A)
    return MaxPrinciplePair(
        id='maxprin-theorem', u1=lower.u, u2=upper.u,
        kappa=CurvatureField.constant(-A),
        citation='comparison of u(z/R) + log(1/R) against u for curvature -A',
        alpha=float(alpha), outer_radius=0.99, status=VALIDATED,
    )


def _alpha1_bounded_kappa():
    def b(z):
        return np.log(_L(z))

    def W(bb):
        return 2.0 + np.sin(bb) / (6.0 + np.sin(bb))

    def W1(bb):
        return 6.0 * np.cos(bb) / (6.0 + np.sin(bb)) ** 2

    def W2(bb):
        s, c = np.sin(bb), np.cos(bb)
        return -6.0 * s / (6.0 + s) ** 2 - 12.0 * c ** 2 / (6.0 + s) ** 3

    def kappa(z):
        bb = b(z)
        s, c = np.sin(bb), np.cos(bb)
        return ((6.0 * (s + c) / (6.0 + s) ** 2 + 12.0 * c ** 2 / (6.0 + s) ** 3 - 1.0)
                * np.exp(-6.0 + 12.0 / (6.0 + s)))

    def w_z(z):
        return -W1(b(z)) / (2.0 * z * _L(z))

    def w_zz(z):
        bb, L = b(z), _L(z)
        return (W2(bb) + W1(bb) * (2.0 * L - 1.0)) / (4.0 * z ** 2 * L ** 2)

    return ClosedFormSolution(
        id='alpha1-bounded-kappa',
        u=lambda z: -np.log(_r(z) * _L(z)) + W(b(z)),
        kappa=CurvatureField(kappa, a=0.05, A=0.005, radial=True, label='alpha1-bounded-kappa'),
        alpha=1.0,
        citation='order 1 with bounded but discontinuous curvature and remainder, sin(log log(1/|z|))',
        remainder=lambda z: W(b(z)), remainder_z=w_z, remainder_zz=w_zz,
    )


def _alpha_half_sharp():
    def v(z):
        return np.abs(np.real(z)) * np.log(_r(z)) + 4.0 * _r(z)

    def kappa(z):
        r = _r(z)
        return -(4.0 + 2.0 * np.abs(np.real(z)) / r) * np.exp(-2.0 * v(z))

    def v_z(z):
        z = np.asarray(z, dtype=complex)
        x, r = np.real(z), _r(z)
        return np.abs(x) / (2.0 * z) + 2.0 * np.conj(z) / r - 0.5 * np.sign(x) * _L(z)

    def v_zz(z):
        z = np.asarray(z, dtype=complex)
        x, r = np.real(z), _r(z)
        return np.sign(x) / (2.0 * z) - np.abs(x) / (2.0 * z ** 2) - np.conj(z) ** 2 / r ** 3

    return ClosedFormSolution(
        id='alpha-half-sharp',
        u=lambda z: -0.5 * np.log(_r(z)) + v(z),
        kappa=CurvatureField(kappa, a=13.0, A=1e-3, label='alpha-half-sharp'),
        alpha=0.5,
        citation='order 1/2 with first derivatives growing like log(1/|z|): v = |Re z| log|z| + 4|z|',
        remainder=v, remainder_z=v_z, remainder_zz=v_zz,
        rho=lambda z: np.minimum(1.0 - _r(z), np.abs(np.real(z))),
        notes='u is not twice differentiable across Re z = 0',
    )


def _alpha_half_continuous_kappa():
    def ell(z):
        return np.log1p(_L(z))

    def v(z):
        return np.real(z) * ell(z) + 4.0 * _r(z)

    def kappa(z):
        r = _r(z)
        lr = np.log(r)
        return -(4.0 + (np.real(z) / r) * (-3.0 + 2.0 * lr) / (1.0 - lr) ** 2) * np.exp(-2.0 * v(z))

    def v_z(z):
        z = np.asarray(z, dtype=complex)
        x, r, L = np.real(z), _r(z), _L(z)
        return 2.0 * np.conj(z) / r - 0.5 * x * np.conj(z) / (r ** 2 * (1.0 + L)) + 0.5 * ell(z)

    def v_zz(z):
        z = np.asarray(z, dtype=complex)
        x, r, L = np.real(z), _r(z), _L(z)
        return (-np.conj(z) ** 2 / r ** 3 - 1.0 / (2.0 * z * (1.0 + L))
                + x / (2.0 * z ** 2 * (1.0 + L)) - x / (4.0 * z ** 2 * (1.0 + L) ** 2))

    return ClosedFormSolution(
        id='alpha-half-continuous-kappa',
        u=lambda z: -0.5 * np.log(_r(z)) + v(z),
        kappa=CurvatureField(kappa, a=13.0, A=1e-4, label='alpha-half-continuous-kappa'),
        alpha=0.5,
        citation='order 1/2 with continuous curvature and logarithmic first-derivative growth: v = Re z log log(e/|z|) + 4|z|',
        remainder=v, remainder_z=v_z, remainder_zz=v_zz,
    )


def _alpha1_holder_rate(beta=1.0):
    beta = float(beta)
    if beta <= 0:
        raise ParameterError(f"beta must be positive, got {beta}")

    def kappa(z):
        t = _L(z) ** -beta
        return -np.exp(-2.0 * t) * (1.0 + beta * (1.0 + beta) * t)

    def w_zz(z):
        L = _L(z)
        return beta / (2.0 * z ** 2) * (-L ** (-beta - 1.0) + 0.5 * (beta + 1.0) * L ** (-beta - 2.0))

    # -kappa = e^{-2t}(1 + beta(1+beta)t) on |z| <= 1/2, t <= log(2)^-beta
    t_max = np.log(2.0) ** -beta
    c = beta * (1.0 + beta)
    t_star = (c - 2.0) / (2.0 * c)
    a = 1.0 if t_star <= 0 else float(np.exp(-2.0 * min(t_star, t_max)) * (1.0 + c * min(t_star, t_max)))
    A = float(min(1.0, np.exp(-2.0 * t_max) * (1.0 + c * t_max)))

    return ClosedFormSolution(
        id='alpha1-holder-rate',
        u=lambda z: -np.log(_r(z) * _L(z)) + _L(z) ** -beta,
        kappa=CurvatureField(kappa, a=max(a, 1.0), A=A, radial=True, label=f'alpha1-holder-rate({beta:g})'),
        alpha=1.0,
        citation='order 1 with Hoelder-type curvature; w = (log 1/|z|)^-beta, w_z = (beta/2)(1/z)(log 1/|z|)^-(beta+1)',
        remainder=lambda z: _L(z) ** -beta,
        remainder_z=lambda z: 0.5 * beta / z * _L(z) ** (-beta - 1.0),
        remainder_zz=w_zz,
        params={'beta': beta},
        notes='curvature bounds hold on |z| <= 1/2',
    )


def _kappa_unbounded():
    def kappa(z):
        return -1.0 / (2.0 * _r(z) * (1.0 + _L(z)))

    def v_zz(z):
        L1 = 1.0 + _L(z)
        return (-1.0 / L1 + 0.5 / L1 ** 2) / (4.0 * z ** 2)

    return ClosedFormSolution(
        id='kappa-unbounded',
        u=lambda z: -0.5 * np.log(_r(z) * (1.0 + _L(z))),
        kappa=CurvatureField(kappa, radial=True, label='kappa-unbounded'),
        alpha=0.5,
        citation='order 1/2 solution whose curvature -1/(|z|(2 - 2 log|z|)) tends to -infinity',
        remainder=lambda z: -0.5 * np.log1p(_L(z)),
        remainder_z=lambda z: 1.0 / (4.0 * z * (1.0 + _L(z))),
        remainder_zz=v_zz,
        theorem_applies=False,
        notes='the order estimate carries a log log correction of coefficient 1/2',
    )


COUNTEREXAMPLES = {
    'maxprin-superharmonic': _maxprin_superharmonic,
    'maxprin-order-infty': _maxprin_order_infty,
    'alpha1-bounded-kappa': _alpha1_bounded_kappa,
    'alpha-half-sharp': _alpha_half_sharp,
    'alpha-half-continuous-kappa': _alpha_half_continuous_kappa,
    'alpha1-holder-rate': _alpha1_holder_rate,
    'kappa-unbounded': _kappa_unbounded,
}

_ID_WITH_ARG = re.compile(r'^([a-z0-9\-]+)\(([^)]*)\)$')


def counterexample(id, beta=None):
    """Counterexample by id; 'alpha1-holder-rate(0.5)' selects beta inline"""
    name, arg = id, None
    match = _ID_WITH_ARG.match(id)
    if match:
        name, arg = match.group(1), match.group(2)
    builder = COUNTEREXAMPLES.get(name)
    if builder is None:
        raise UnknownEntryError(f"unknown counterexample id: {id}")
    if name == 'alpha1-holder-rate':
        if arg is not None:
            try:
                beta = float(arg)
            except ValueError:
                raise ParameterError(f"bad beta in {id}")
        return _cached_holder(1.0 if beta is None else float(beta))
    return _cached_counterexample(name)


@lru_cache(maxsize=None)
def _cached_counterexample(name):
    return COUNTEREXAMPLES[name]()


@lru_cache(maxsize=16)
def _cached_holder(beta):
    return _alpha1_holder_rate(beta)


# Residual oracle

@dataclass(frozen=True)
class ResidualReport:
    """Residual |Delta u + kappa e^{2u}| over random interior points"""
    max_residual: float
    max_kappa_discrepancy: float
    n_points: int
    passed: bool


def sample_points(n, r_lo=1e-3, r_hi=0.9, seed=SEED, rho=None):
    """Log-uniform radii, uniform angles; points too close to a non-smooth set are skipped"""
    rng = np.random.default_rng(seed)
    kept = []
    while sum(len(k) for k in kept) < n:
        r = np.exp(rng.uniform(np.log(r_lo), np.log(r_hi), size=4 * n))
        th = rng.uniform(0.0, 2.0 * np.pi, size=4 * n)
        z = r * np.exp(1j * th)
        if rho is not None:
            z = z[np.asarray(rho(z)) >= SMOOTH_MARGIN * np.abs(z)]
        kept.append(z)
    return np.concatenate(kept)[:n]


def residual(entry, n=RESIDUAL_SAMPLES, r_lo=1e-3, r_hi=0.9, seed=SEED, tol=RESIDUAL_TOL):
    """Stencil residual of a catalog entry and the drift between derived and printed kappa"""
    u = entry.u1 if isinstance(entry, MaxPrinciplePair) else entry.u
    rho = getattr(entry, 'rho', None)
    z = sample_points(n, r_lo, r_hi, seed, rho)
    dist = rho(z) if rho is not None else np.maximum(1.0 - np.abs(z), 1e-12)
    lap = grd.laplacian_at(u, z, rho=dist)
    e2u = np.exp(2.0 * u(z))
    kappa = np.asarray(entry.kappa(z), dtype=float)
    res = np.abs(lap + kappa * e2u)
    derived = -lap / e2u
    drift = np.abs(derived - kappa) / np.maximum(1.0, np.abs(kappa))
    max_res = float(np.max(res))
    return ResidualReport(max_res, float(np.max(drift)), len(z), max_res <= tol)


def validate(entry, tol=RESIDUAL_TOL):
    """Residual-check an entry; failing entries are returned quarantined, not raised"""
    report = residual(entry, tol=tol)
    if report.passed:
        return replace(entry, status=VALIDATED)
    logger.warning(f"Quarantining {entry.label}: residual {report.max_residual:.3e} exceeds {tol:g}")
    return replace(entry, status=QUARANTINED)


# Catalog

def get_entry(id, alpha=None, A=None, a=None, R=None, beta=None):
    """Resolve a catalog id with optional parameters"""
    if id == 'hyperbolic-disk':
        return hyperbolic_disk(4.0 if A is None else A)
    if id == 'hyperbolic-punctured-disk':
        return hyperbolic_punctured_disk(4.0 if A is None else A)
    if id == 'supersolution':
        return supersolution_family(0.5 if alpha is None else alpha, 4.0 if A is None else A)
    if id == 'subsolution':
        return subsolution_family(0.5 if alpha is None else alpha, 4.0 if a is None else a, 2.0 if R is None else R)
    if id == 'nitsche':
        return nitsche_family(1.0 if alpha is None else alpha)
    if id == 'curvature-barrier':
        return curvature_barrier(1.0 if a is None else a, 0.5 if R is None else R)
    if id == 'maxprin-theorem':
        return theorem_pair(0.5 if alpha is None else alpha, 4.0 if A is None else A, 2.0 if R is None else R)
    return counterexample(id, beta=beta)


def list_entries():
    """Default-parameter entries shown by `families list`"""
    entries = [
        hyperbolic_disk(4.0),
        hyperbolic_punctured_disk(4.0),
        supersolution_family(0.5, 4.0),
        subsolution_family(0.5, 4.0, 2.0),
        curvature_barrier(1.0, 0.5),
    ]
    entries += [nitsche_family(alpha) for alpha in (-1.0, 0.0, 0.3, 0.5, 0.75, 0.9, 1.0)]
    entries.append(theorem_pair())
    entries += [counterexample(name) for name in COUNTEREXAMPLES]
    return entries


def eval_record(entry, z):
    """Point evaluation of an entry, with its local stencil residual"""
    z = complex(z)
    if isinstance(entry, MaxPrinciplePair):
        return {'id': entry.label, 'z_re': z.real, 'z_im': z.imag,
                'u1': float(entry.u1(z)), 'u2': float(entry.u2(z)), 'kappa': float(entry.kappa(z))}
    u = float(entry.u(z))
    kappa = float(entry.kappa(z))
    dist = entry.rho(z) if entry.rho is not None else max(1.0 - abs(z), 1e-12)
    lap = grd.laplacian_at(entry.u, z, rho=dist)
    record = {'id': entry.label, 'z_re': z.real, 'z_im': z.imag, 'u': u, 'kappa': kappa,
              'alpha': entry.alpha, 'residual': abs(lap + kappa * np.exp(2.0 * u))}
    name = 'w' if entry.branch == 'critical' else 'v'
    if entry.remainder is not None:
        record[name] = float(entry.remainder(z))
    for suffix, fn in (('_z', entry.remainder_z), ('_zz', entry.remainder_zz)):
        if fn is not None:
            value = complex(fn(z))
            record[f'{name}{suffix}_re'] = value.real
            record[f'{name}{suffix}_im'] = value.imag
    return record
