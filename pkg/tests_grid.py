import unittest

import numpy as np

import grid as grd
from errors import DomainError, EvaluationError, GridSizeError, StepError


class TestBuildGrid(unittest.TestCase):
    """Test cases for grid construction"""

    def test_nodes_are_log_polar(self):
        """Test that rings are geometric and angles uniform"""
        g = grd.build_grid(0.01, 0.5, 9, 16)
        self.assertEqual(g.shape, (9, 16))
        self.assertAlmostEqual(g.radii[0], 0.01)
        self.assertAlmostEqual(g.radii[-1], 0.5)
        ratios = g.radii[1:] / g.radii[:-1]
        np.testing.assert_allclose(ratios, ratios[0])
        np.testing.assert_allclose(np.abs(g.z[3]), g.radii[3])
        self.assertEqual(g.node_count, 144)

    def test_bad_radii(self):
        """Test that radii outside 0 < r_min < r_max < 1 are rejected"""
        with self.assertRaises(DomainError):
            grd.build_grid(0.0, 0.5, 9, 16)
        with self.assertRaises(DomainError):
            grd.build_grid(0.1, 1.0, 9, 16)
        with self.assertRaises(DomainError):
            grd.build_grid(0.5, 0.1, 9, 16)

    def test_bad_sizes(self):
        """Test that too few nodes or an odd angular count are rejected"""
        with self.assertRaises(GridSizeError):
            grd.build_grid(0.1, 0.5, 3, 16)
        with self.assertRaises(GridSizeError):
            grd.build_grid(0.1, 0.5, 9, 4)
        with self.assertRaises(GridSizeError):
            grd.build_grid(0.1, 0.5, 9, 15)


class TestGridField(unittest.TestCase):
    """Test cases for sampled fields and the discrete Laplacian"""

    def setUp(self):
        self.grid = grd.build_grid(0.1, 0.5, 65, 64)

    def test_shape_mismatch(self):
        """Test that a field must match its grid"""
        with self.assertRaises(GridSizeError):
            grd.GridField(np.zeros((3, 3)), self.grid)

    def test_non_finite_values(self):
        """Test that a field with NaN is rejected"""
        values = np.zeros(self.grid.shape)
        values[2, 2] = np.nan
        with self.assertRaises(EvaluationError):
            grd.GridField(values, self.grid)

    def test_laplacian_of_log_is_zero(self):
        """Test that log|z| is discretely harmonic"""
        field = self.grid.sample(lambda z: np.log(np.abs(z)))
        lap = grd.apply_laplacian(field)
        self.assertLess(lap.interior_max_norm(), 1e-8)
        self.assertEqual(lap.one_sided_rows, (0, 64))

    def test_laplacian_of_square(self):
        """Test that Delta |z|^2 = 4 to second order"""
        field = self.grid.sample(lambda z: np.abs(z) ** 2)
        lap = grd.apply_laplacian(field)
        np.testing.assert_allclose(lap.interior(), 4.0, rtol=1e-2)

    def test_operator_matches_stencil(self):
        """Test that the sparse operator plus boundary terms reproduces u_ss + u_tt"""
        g = grd.build_grid(0.1, 0.5, 17, 16)
        u = np.real(g.z) ** 2 - np.imag(g.z) ** 2 + np.log(np.abs(g.z))
        op = grd.interior_operator(g)
        bc = grd.boundary_contribution(g, u[0], u[-1])
        scaled = (op @ u[1:-1].ravel() + bc).reshape(15, 16)
        field = grd.apply_laplacian(grd.GridField(u, g))
        expected = field.values[1:-1] * np.exp(2.0 * g.s[1:-1])[:, None]
        np.testing.assert_allclose(scaled, expected, atol=1e-8)

    def test_subtraction_and_callable(self):
        """Test field difference and the interpolating callable"""
        f = self.grid.sample(lambda z: np.real(z) * np.imag(z))
        zero = f - f
        self.assertEqual(zero.interior_max_norm(), 0.0)
        interp = f.as_callable()
        pts = np.array([0.2 * np.exp(0.3j), 0.31 * np.exp(2.9j), 0.45 * np.exp(-1.1j)])
        np.testing.assert_allclose(interp(pts), np.real(pts) * np.imag(pts), atol=1e-4)

    def test_csv_rows(self):
        """Test that rows enumerate every node once"""
        f = self.grid.sample(lambda z: np.abs(z))
        rows = list(f.csv_rows())
        self.assertEqual(len(rows), self.grid.node_count)
        s, theta, value = rows[0]
        self.assertAlmostEqual(np.exp(s), value)


class TestCallableDerivatives(unittest.TestCase):
    """Test cases for the Wirtinger derivatives and the callable Laplacian"""

    def test_dz_of_modulus_squared(self):
        """Test that d/dz |z|^2 = conj(z)"""
        z = np.array([0.3 + 0.1j, -0.02 + 0.05j, 1e-3j])
        np.testing.assert_allclose(grd.dz(lambda w: np.abs(w) ** 2, z), np.conj(z), atol=1e-9)

    def test_holomorphic(self):
        """Test that a holomorphic map has d/dzbar = 0 and d/dz = f'"""
        z = 0.4 * np.exp(1.2j)
        f = lambda w: np.real(w ** 3)
        self.assertAlmostEqual(abs(grd.dz(f, z) - 1.5 * z ** 2), 0.0, places=8)
        self.assertAlmostEqual(abs(grd.dzbar(f, z) - 1.5 * np.conj(z) ** 2), 0.0, places=8)

    def test_dzz(self):
        """Test the nested second derivative on Re z^4 / 2"""
        z = 0.3 - 0.2j
        value = grd.dzz(lambda w: np.real(w ** 4), z)
        self.assertAlmostEqual(abs(value - 6.0 * z ** 2), 0.0, places=5)

    def test_dz_of_modulus(self):
        """Test d/dz (k|z|) = k conj(z)/(2|z|)"""
        z = 0.2 * np.exp(2.3j)
        value = grd.dz(lambda w: 3.0 * np.abs(w), z)
        self.assertAlmostEqual(abs(value - 3.0 * np.conj(z) / (2.0 * abs(z))), 0.0, places=8)

    def test_step_near_singularity(self):
        """Test that a step reaching |z|/2 raises StepError"""
        with self.assertRaises(StepError):
            grd.dz(np.abs, 1e-3, h=1e-3)

    def test_default_step(self):
        """Test the default step bounds"""
        self.assertAlmostEqual(grd.default_step(0.5), 5e-5)
        self.assertAlmostEqual(grd.default_step(1e-4), 1e-7)
        self.assertAlmostEqual(grd.default_step(0.5, rho=1e-3), 1e-6)

    def test_laplacian_at(self):
        """Test the log-polar stencil on |z|^2 and a harmonic function"""
        z = np.array([0.5, 0.2j, 1e-4 * np.exp(0.3j)])
        np.testing.assert_allclose(grd.laplacian_at(lambda w: np.abs(w) ** 2, z), 4.0, rtol=1e-6)
        harmonic = grd.laplacian_at(lambda w: np.real(w ** 3) + np.log(np.abs(w)), 0.3 + 0.3j)
        self.assertLess(abs(harmonic), 1e-5)

    def test_laplacian_at_origin(self):
        """Test that the stencil refuses z = 0"""
        with self.assertRaises(StepError):
            grd.laplacian_at(np.abs, 0.0)

    def test_circle_points(self):
        """Test equispaced circle sampling"""
        pts = grd.circle_points(0.25, 8)
        np.testing.assert_allclose(np.abs(pts), 0.25)
        self.assertAlmostEqual(pts[0], 0.25)
        self.assertAlmostEqual(abs(np.sum(pts)), 0.0)


if __name__ == '__main__':
    unittest.main()
