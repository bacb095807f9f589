import unittest

import numpy as np

import families
import grid as grd
import metrics
from errors import DomainError, EvaluationError


class TestCurvatureField(unittest.TestCase):
    """Test cases for curvature descriptors"""

    def test_constant_bounds(self):
        """Test that a negative constant declares a = A = -value"""
        k = metrics.CurvatureField.constant(-4.0)
        self.assertTrue(k.strictly_negative)
        self.assertEqual((k.a, k.A), (4.0, 4.0))
        np.testing.assert_allclose(k(np.array([0.1, 0.2j])), -4.0)
        self.assertTrue(k.check_bounds(np.array([0.1, 0.5j])))

    def test_zero_curvature_not_negative(self):
        """Test that kappa = 0 is not strictly negative"""
        k = metrics.CurvatureField.constant(0.0)
        self.assertFalse(k.strictly_negative)
        with self.assertRaises(DomainError):
            k.check_bounds(np.array([0.1]))

    def test_violated_bounds(self):
        """Test that sampled values outside the declared band raise"""
        k = metrics.CurvatureField(lambda z: -1.0 - np.abs(z), a=1.2, A=1.0)
        with self.assertRaises(DomainError):
            k.check_bounds(np.array([0.1, 0.5]))


class TestMetricCalculus(unittest.TestCase):
    """Test cases for curvature, connection and Schwarzian"""

    def test_hyperbolic_disk_curvature(self):
        """Test that 2/(sqrt(A)(1-|z|^2)) has curvature -A"""
        m = families.hyperbolic_disk(4.0).density()
        z = np.array([0.05, 0.3 + 0.2j, -0.6j])
        np.testing.assert_allclose(metrics.curvature(m, z), -4.0, atol=1e-6)

    def test_punctured_disk_curvature(self):
        """Test the complete punctured-disk metric near 0"""
        m = families.hyperbolic_punctured_disk(4.0).density()
        for z in (1e-6 * np.exp(0.4j), 1e-3, 0.5j):
            self.assertAlmostEqual(metrics.curvature(m, z), -4.0, places=5)

    def test_connection_analytic_and_numeric(self):
        """Test that the closed-form connection agrees with differencing"""
        m = families.nitsche_family(0.75).density()
        z = 0.2 * np.exp(1.1j)
        analytic = metrics.connection(m, z)
        numeric = metrics.connection(m, z, analytic=False)
        self.assertLess(abs(analytic - numeric), 1e-7)

    def test_schwarzian_of_punctured_disk(self):
        """Test z^2 S -> 1/2 for the order-one metric"""
        m = families.hyperbolic_punctured_disk(4.0).density()
        z = 1e-5 * np.exp(0.7j)
        value = z ** 2 * metrics.schwarzian(m, z)
        self.assertLess(abs(value - 0.5), 0.02)

    def test_outside_domain(self):
        """Test that points outside the punctured disk raise"""
        m = families.hyperbolic_disk(4.0).density()
        with self.assertRaises(DomainError):
            metrics.curvature(m, 1.2)

    def test_metric_record(self):
        """Test the JSON-ready record"""
        record = metrics.metric_record(families.hyperbolic_disk(4.0).density(), 0.3)
        self.assertAlmostEqual(record['lambda'], 1.0 / 0.91)
        self.assertAlmostEqual(record['kappa'], -4.0, places=5)
        self.assertEqual(record['method'], 'callable-5pt-richardson')
        self.assertAlmostEqual(record['gamma_im'], 0.0)

    def test_metric_record_derivative_paths(self):
        """Test that the record names the connection and Schwarzian paths"""
        entry = families.nitsche_family(0.75)
        z = 0.2 * np.exp(0.4j)
        analytic = metrics.metric_record(entry.density(), z)
        self.assertEqual(analytic['connection_method'], 'analytic')
        self.assertEqual(analytic['schwarzian_method'], 'analytic')
        stencil = metrics.metric_record(metrics.density_from_u(entry.u), z)
        self.assertEqual(stencil['connection_method'], 'stencil')
        self.assertEqual(stencil['schwarzian_method'], 'nested-stencil')
        self.assertAlmostEqual(stencil['gamma_re'], analytic['gamma_re'], places=5)
        self.assertAlmostEqual(stencil['s_re'], analytic['s_re'], delta=1e-4 * (1.0 + abs(analytic['s_re'])))


class TestConstructions(unittest.TestCase):
    """Test cases for pullbacks and Liouville metrics"""

    def test_liouville_identity(self):
        """Test that f(z) = z gives 1/(1-|z|^2) of curvature -4"""
        m = metrics.liouville_metric(lambda z: z, lambda z: np.ones(np.shape(z), dtype=complex))
        self.assertAlmostEqual(m.lam(0.5), 1.0 / 0.75)
        self.assertAlmostEqual(metrics.curvature(m, 0.4 + 0.1j), -4.0, places=5)

    def test_liouville_constant_map(self):
        """Test that a constant map generates no metric"""
        with self.assertRaises(EvaluationError):
            metrics.liouville_metric(lambda z: 0.5 * np.ones(np.shape(z)), lambda z: np.zeros(np.shape(z)))

    def test_liouville_leaves_disk(self):
        """Test that |f| >= 1 is rejected on evaluation"""
        m = metrics.liouville_metric(lambda z: 3.0 * z, lambda z: 3.0 * np.ones(np.shape(z)))
        with self.assertRaises(EvaluationError):
            m.lam(0.5)

    def test_pullback_preserves_curvature(self):
        """Test that a pullback by z/2 keeps curvature -4"""
        base = families.hyperbolic_disk(4.0).density()
        m = metrics.pullback(base, lambda z: 0.5 * z, lambda z: 0.5 * np.ones(np.shape(z)))
        self.assertAlmostEqual(metrics.curvature(m, 0.5 + 0.3j), -4.0, places=5)

    def test_pullback_critical_point(self):
        """Test that f'(z) = 0 raises"""
        base = families.hyperbolic_disk(4.0).density()
        m = metrics.pullback(base, lambda z: 0.5 * z ** 2, lambda z: z)
        with self.assertRaises(EvaluationError):
            m.lam(np.array([0.0 + 0.0j]))


class TestCompleteness(unittest.TestCase):
    """Test cases for the completeness probe"""

    radii = 10.0 ** -np.arange(1, 21, dtype=float)

    def test_complete_metric_diverges(self):
        """Test that the punctured-disk metric has divergent distance"""
        m = families.hyperbolic_punctured_disk(4.0).density()
        lengths = metrics.completeness_probe(m, 0.5, self.radii)
        self.assertTrue(np.all(np.diff(lengths) > 0))
        self.assertEqual(metrics.completeness_verdict(lengths, self.radii), 'divergent')

    def test_incomplete_metric_bounded(self):
        """Test that a metric of order 1/2 has bounded distance"""
        m = families.nitsche_family(0.5).density()
        lengths = metrics.completeness_probe(m, 0.5, self.radii)
        self.assertEqual(metrics.completeness_verdict(lengths, self.radii), 'bounded')

    def test_bad_radii(self):
        """Test that radii must decrease below |z0|"""
        m = families.hyperbolic_disk(4.0).density()
        with self.assertRaises(DomainError):
            metrics.completeness_probe(m, 0.5, np.array([0.6, 0.1]))


class TestGridMetric(unittest.TestCase):
    """Test cases for grid-backed densities"""

    def test_curvature_from_field(self):
        """Test that a sampled solution reports curvature near -4"""
        g = grd.build_grid(0.05, 0.5, 129, 128)
        u = families.hyperbolic_disk(4.0).u
        m = metrics.density_from_field(g.sample(u))
        self.assertEqual(m.smoothness_tag, metrics.GRID)
        self.assertAlmostEqual(metrics.curvature(m, 0.2 * np.exp(0.5j)), -4.0, places=2)


if __name__ == '__main__':
    unittest.main()
