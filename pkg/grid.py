"""Log-polar grids on annuli and numerical Wirtinger calculus.

Nodes sit at z = exp(s) e^{i theta} with s uniform in [log r_min, log r_max]
and theta uniform in [0, 2 pi). In these coordinates the Laplacian is
|z|^-2 (d^2/ds^2 + d^2/dtheta^2), which is what every stencil here uses.

Callables passed to this module are vectorized: they accept a numpy array of
complex points and return an array of the same shape.
"""
import logging
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.sparse as sp
from scipy.interpolate import RectBivariateSpline

from errors import DomainError, GridSizeError, StepError, EvaluationError

logger = logging.getLogger(__name__)

# Richardson combination of a second-order central difference at h and h/2
_RICHARDSON = (4.0, -1.0, 3.0)


@dataclass(frozen=True)
class AnnularGrid:
    """Log-polar discretization of {r_min <= |z| <= r_max}"""
    r_min: float
    r_max: float
    n_radial: int
    n_angular: int

    @cached_property
    def s(self):
        return np.linspace(np.log(self.r_min), np.log(self.r_max), self.n_radial)

    @cached_property
    def theta(self):
        return 2.0 * np.pi * np.arange(self.n_angular) / self.n_angular

    @property
    def ds(self):
        return (np.log(self.r_max) - np.log(self.r_min)) / (self.n_radial - 1)

    @property
    def dtheta(self):
        return 2.0 * np.pi / self.n_angular

    @cached_property
    def radii(self):
        return np.exp(self.s)

    @cached_property
    def z(self):
        """Complex node coordinates, shape (n_radial, n_angular)"""
        return np.exp(self.s)[:, None] * np.exp(1j * self.theta)[None, :]

    @property
    def node_count(self):
        return self.n_radial * self.n_angular

    @property
    def shape(self):
        return (self.n_radial, self.n_angular)

    def sample(self, f):
        """Sample a vectorized callable at every node"""
        return GridField(np.asarray(f(self.z), dtype=float), self)

    def header(self):
        return {
            'r_min': self.r_min,
            'r_max': self.r_max,
            'n_radial': self.n_radial,
            'n_angular': self.n_angular,
        }


def build_grid(r_min, r_max, n_radial, n_angular):
    """Build a log-polar annular grid

    Args:
        r_min: inner radius, 0 < r_min
        r_max: outer radius, r_min < r_max < 1
        n_radial: number of rings (>= 4)
        n_angular: number of angles per ring (even, >= 8)

    Returns:
        AnnularGrid
    """
    if not (0.0 < r_min < r_max < 1.0):
        raise DomainError(f"radii must satisfy 0 < r_min < r_max < 1, got r_min={r_min}, r_max={r_max}")
    if n_radial < 4 or n_angular < 8:
        raise GridSizeError(f"grid too small: n_radial={n_radial} (>= 4), n_angular={n_angular} (>= 8)")
    if n_angular % 2:
        raise GridSizeError(f"n_angular must be even, got {n_angular}")
    return AnnularGrid(float(r_min), float(r_max), int(n_radial), int(n_angular))


@dataclass(frozen=True)
class GridField:
    """Real samples on an AnnularGrid, one value per node"""
    values: np.ndarray
    grid: AnnularGrid
    one_sided_rows: tuple = field(default=())

    def __post_init__(self):
        values = np.array(self.values, dtype=float, copy=True)
        if values.shape != self.grid.shape:
            raise GridSizeError(f"field shape {values.shape} does not match grid {self.grid.shape}")
        if not np.all(np.isfinite(values)):
            raise EvaluationError("grid field has non-finite values")
        values.setflags(write=False)
        object.__setattr__(self, 'values', values)

    def interior(self):
        """Values on rings not flagged as one-sided"""
        mask = np.ones(self.grid.n_radial, dtype=bool)
        mask[list(self.one_sided_rows)] = False
        return self.values[mask]

    def interior_max_norm(self):
        return float(np.max(np.abs(self.interior())))

    def __sub__(self, other):
        if isinstance(other, GridField):
            other = other.values
        return GridField(self.values - other, self.grid, self.one_sided_rows)

    def as_callable(self):
        """Bicubic interpolant in (log r, theta), periodic in theta"""
        grid = self.grid
        pad = 3
        theta = np.concatenate([grid.theta[-pad:] - 2 * np.pi, grid.theta, grid.theta[:pad] + 2 * np.pi])
        values = np.concatenate([self.values[:, -pad:], self.values, self.values[:, :pad]], axis=1)
        spline = RectBivariateSpline(grid.s, theta, values, kx=3, ky=3)
        s_lo, s_hi = grid.s[0], grid.s[-1]

        def interpolant(z):
            z = np.asarray(z, dtype=complex)
            s = np.log(np.abs(z))
            if np.any(s < s_lo - 1e-12) or np.any(s > s_hi + 1e-12):
                raise DomainError("point outside the grid annulus")
            th = np.mod(np.angle(z), 2 * np.pi)
            return spline.ev(s, th)

        return interpolant

    def csv_rows(self):
        """Rows (s, theta, value) in node order"""
        grid = self.grid
        for i, s in enumerate(grid.s):
            for j, th in enumerate(grid.theta):
                yield (float(s), float(th), float(self.values[i, j]))


def apply_laplacian(field):
    """Discrete Laplacian of a grid field, second order in ds and dtheta

    Boundary rings use one-sided second differences in s and are flagged so
    residual norms can skip them.
    """
    grid = field.grid
    if grid.n_radial < 3:
        raise GridSizeError("apply_laplacian needs at least 3 rings")
    u = field.values
    ds2 = grid.ds ** 2
    dt2 = grid.dtheta ** 2

    u_tt = (np.roll(u, -1, axis=1) - 2.0 * u + np.roll(u, 1, axis=1)) / dt2
    u_ss = np.empty_like(u)
    u_ss[1:-1] = (u[2:] - 2.0 * u[1:-1] + u[:-2]) / ds2
    if grid.n_radial >= 4:
        u_ss[0] = (2.0 * u[0] - 5.0 * u[1] + 4.0 * u[2] - u[3]) / ds2
        u_ss[-1] = (2.0 * u[-1] - 5.0 * u[-2] + 4.0 * u[-3] - u[-4]) / ds2
    else:
        u_ss[0] = u_ss[1]
        u_ss[-1] = u_ss[-2]

    lap = (u_ss + u_tt) * np.exp(-2.0 * grid.s)[:, None]
    return GridField(lap, grid, one_sided_rows=(0, grid.n_radial - 1))


def interior_operator(grid):
    """Sparse d^2/ds^2 + d^2/dtheta^2 on interior rings with Dirichlet rows eliminated

    Unknown k = (i - 1) * n_angular + j for ring i in 1..n_radial-2.
    """
    m = grid.n_radial - 2
    n = grid.n_angular
    d2s = sp.diags([1.0, -2.0, 1.0], [-1, 0, 1], shape=(m, m)) / grid.ds ** 2
    d2t = sp.diags([1.0, -2.0, 1.0], [-1, 0, 1], shape=(n, n)).tolil()
    d2t[0, n - 1] = 1.0
    d2t[n - 1, 0] = 1.0
    d2t = d2t.tocsr() / grid.dtheta ** 2
    return (sp.kron(sp.identity(m), d2t) + sp.kron(d2s, sp.identity(n))).tocsc()


def boundary_contribution(grid, inner, outer):
    """Right-hand-side terms that the eliminated Dirichlet rings feed into the interior system"""
    m = grid.n_radial - 2
    rhs = np.zeros((m, grid.n_angular))
    rhs[0] += np.asarray(inner) / grid.ds ** 2
    rhs[-1] += np.asarray(outer) / grid.ds ** 2
    return rhs.ravel()


def default_step(z, rho=None):
    """Step for callable stencils: max(1e-6, 1e-4|z|), kept below 1e-3|z| and 1e-3 rho"""
    r = np.abs(z)
    h = np.minimum(np.maximum(1e-6, 1e-4 * r), 1e-3 * r)
    if rho is not None:
        h = np.minimum(h, 1e-3 * np.asarray(rho))
    return h


def _check_step(z, h):
    if np.any(np.asarray(h) >= np.abs(z) / 2.0):
        raise StepError("step must be smaller than |z|/2")
    if np.any(np.asarray(h) <= 0.0):
        raise StepError("step must be positive")


def _partials(f, z, h):
    """Richardson-extrapolated central differences (f_x, f_y)"""
    def central(step):
        fx = (f(z + step) - f(z - step)) / (2.0 * step)
        fy = (f(z + 1j * step) - f(z - 1j * step)) / (2.0 * step)
        return fx, fy

    fx1, fy1 = central(h)
    fx2, fy2 = central(h / 2.0)
    a, b, c = _RICHARDSON
    return (a * fx2 + b * fx1) / c, (a * fy2 + b * fy1) / c


def _prepare(z, h, rho):
    scalar = np.ndim(z) == 0
    z = np.asarray(z, dtype=complex)
    if h is None:
        h = default_step(z, rho)
    h = np.broadcast_to(np.asarray(h, dtype=float), z.shape)
    _check_step(z, h)
    return z, h, scalar


def dz(f, z, h=None, rho=None):
    """Wirtinger derivative (f_x - i f_y)/2, fourth order via one Richardson step"""
    z, h, scalar = _prepare(z, h, rho)
    fx, fy = _partials(f, z, h)
    out = 0.5 * (fx - 1j * fy)
    return complex(out) if scalar else out


def dzbar(f, z, h=None, rho=None):
    """Conjugate Wirtinger derivative (f_x + i f_y)/2"""
    z, h, scalar = _prepare(z, h, rho)
    fx, fy = _partials(f, z, h)
    out = 0.5 * (fx + 1j * fy)
    return complex(out) if scalar else out


def dzz(f, z, h=None, rho=None):
    """Second Wirtinger derivative by nesting dz, outer step ten times the inner one"""
    z, h, scalar = _prepare(z, h, rho)
    out = dz(lambda w: dz(f, w, h=h), z, h=10.0 * h)
    return complex(out) if scalar else out


def laplacian_step(z, rho=None):
    """Log-polar step for callable Laplacians, scaled to the distance rho to any non-smooth set"""
    r = np.abs(z)
    if rho is None:
        rho = np.maximum(1.0 - r, 1e-12)
    return np.minimum(2e-2, 0.1 * np.asarray(rho) / r)


def laplacian_at(f, z, rho=None, h=None):
    """5-point Laplacian of a callable in log-polar coordinates with one Richardson step"""
    scalar = np.ndim(z) == 0
    z = np.asarray(z, dtype=complex)
    if np.any(z == 0):
        raise StepError("the Laplacian stencil cannot be centered at 0")
    if h is None:
        h = laplacian_step(z, rho)
    h = np.broadcast_to(np.asarray(h, dtype=float), z.shape)
    f0 = f(z)

    def five_point(step):
        total = f(z * np.exp(step)) + f(z * np.exp(-step)) + f(z * np.exp(1j * step)) + f(z * np.exp(-1j * step))
        return (total - 4.0 * f0) / step ** 2

    a, b, c = _RICHARDSON
    lap = (a * five_point(h / 2.0) + b * five_point(h)) / c / np.abs(z) ** 2
    return float(lap) if scalar else lap


def circle_points(r, n):
    """n equispaced points on |z| = r starting at theta = 0"""
    return r * np.exp(2j * np.pi * np.arange(n) / n)
