import unittest
from functools import lru_cache
from unittest.mock import patch

import numpy as np

import asymptotics as asy
import potential
from errors import (DomainError, EvaluationError, HolderExponentError, ParameterError,
                    QuadratureBudgetError)
from families import nitsche_family
from potential import LOG2, POWER, PotentialSpec


def one(xi):
    return np.ones(np.shape(xi))


def radial_value(rho, alpha):
    """Potential of rho^{-2 alpha} on the unit disk"""
    beta = 2.0 - 2.0 * alpha
    return -(1.0 - rho ** beta) / beta ** 2


def radial_slope(rho, alpha):
    beta = 2.0 - 2.0 * alpha
    return rho ** (beta - 1.0) / beta


class TestPotentialSpec(unittest.TestCase):
    """Test cases for density validation"""

    def test_rejects_bad_parameters(self):
        """Test weight, radius, alpha and Hoelder checks"""
        with self.assertRaises(ParameterError):
            PotentialSpec(q=one, weight='cubic')
        with self.assertRaises(DomainError):
            PotentialSpec(q=one, r=0.0)
        with self.assertRaises(DomainError):
            PotentialSpec(q=one, alpha=1.0)
        with self.assertRaises(DomainError):
            PotentialSpec(q=one, r=1.5)
        with self.assertRaises(DomainError):
            PotentialSpec(q=one, weight=LOG2, r=1.0)
        with self.assertRaises(HolderExponentError):
            PotentialSpec(q=one, holder=0.0)

    def test_unbounded_q(self):
        """Test that q must be finite on K_r"""
        with self.assertRaises(EvaluationError):
            PotentialSpec(q=lambda xi: 1.0 / np.abs(xi))

    def test_density_vanishes_outside(self):
        """Test the zero extension outside K_r"""
        spec = PotentialSpec(q=one, alpha=0.25, r=0.5)
        values = spec.density(np.array([0.25, 0.6j]))
        self.assertAlmostEqual(values[0], 0.25 ** -0.5)
        self.assertEqual(values[1], 0.0)
        self.assertEqual(spec.record()['weight'], POWER)


class TestNewtonPotential(unittest.TestCase):
    """Test cases for the potential value"""

    def test_value_at_origin(self):
        """Test omega(0) = -1/4 for alpha = 0 and -1 for alpha = 1/2"""
        for alpha, expected in ((0.0, -0.25), (0.5, -1.0)):
            result = potential.newton_potential(PotentialSpec(q=one, alpha=alpha), 0.0)
            self.assertAlmostEqual(result.value, expected, delta=1e-5)

    def test_radial_oracle(self):
        """Test the closed form -(1 - rho^(2-2 alpha))/(2-2 alpha)^2"""
        for alpha in (0.0, 0.25, 0.5, -0.5):
            spec = PotentialSpec(q=one, alpha=alpha)
            for z in (0.3, 0.5j, -0.7 + 0.1j):
                result = potential.newton_potential(spec, z)
                self.assertAlmostEqual(result.value, radial_value(abs(z), alpha), delta=1e-5,
                                       msg=f'alpha={alpha}, z={z}')
                self.assertGreater(result.nodes_used, 0)

    def test_domain_errors(self):
        """Test points outside K_r and the log2 origin"""
        with self.assertRaises(DomainError):
            potential.newton_potential(PotentialSpec(q=one), 1.0)
        with self.assertRaises(DomainError):
            potential.newton_potential(PotentialSpec(q=one, weight=LOG2, r=0.5), 0.0)

    def test_node_budget(self):
        """Test that exhausting the node cap raises QuadratureBudgetError"""
        with patch('potential.QUAD_NODE_CAP', 10), patch('potential.QUAD_TOL', 0.0):
            with self.assertRaises(QuadratureBudgetError):
                potential.newton_potential(PotentialSpec(q=one, alpha=0.25), 0.3)

    def test_result_dict(self):
        """Test the result dictionary"""
        data = potential.newton_potential(PotentialSpec(q=one), 0.2).to_dict()
        self.assertEqual(set(data), {'value', 'est_error', 'nodes_used'})


class TestGradient(unittest.TestCase):
    """Test cases for the kernel gradient"""

    def test_power_gradient(self):
        """Test d/dx omega = rho^(1-2 alpha)/(2-2 alpha) on the real axis"""
        for alpha in (0.0, 0.25, 0.75):
            spec = PotentialSpec(q=one, alpha=alpha)
            result = potential.potential_gradient(spec, 0.3, 0)
            self.assertAlmostEqual(result.value, radial_slope(0.3, alpha), delta=1e-5, msg=f'alpha={alpha}')
            self.assertAlmostEqual(potential.potential_gradient(spec, 0.3, 1).value, 0.0, delta=1e-6)

    def test_log2_gradient(self):
        """Test that the log2 weight gives 1/(rho log(1/rho))"""
        spec = PotentialSpec(q=one, weight=LOG2, r=0.5)
        result = potential.potential_gradient(spec, 0.2j, 1)
        expected = 1.0 / (0.2 * np.log(5.0))
        self.assertAlmostEqual(result.value / expected, 1.0, delta=1e-5)

    def test_gradient_at_origin(self):
        """Test the gradient at 0 for mild weights and the refusal otherwise"""
        result = potential.potential_gradient(PotentialSpec(q=lambda xi: np.real(xi)), 0.0, 0)
        self.assertAlmostEqual(result.value, -0.25, delta=1e-5)
        with self.assertRaises(DomainError):
            potential.potential_gradient(PotentialSpec(q=one, alpha=0.5), 0.0, 0)
        with self.assertRaises(ParameterError):
            potential.potential_gradient(PotentialSpec(q=one), 0.3, 2)

    def test_cross_check(self):
        """Test that the kernel agrees with differencing the potential"""
        check = potential.gradient_cross_check(PotentialSpec(q=one, alpha=0.25), 0.3, 0)
        self.assertLess(check['difference'], 1e-3)
        self.assertAlmostEqual(check['kernel'], radial_slope(0.3, 0.25), delta=1e-5)

    def test_growth_of_gradient(self):
        """Test that |grad omega| grows like |z|^(1 - 2 alpha) for alpha = 3/4"""
        spec = PotentialSpec(q=one, alpha=0.75)

        @lru_cache(maxsize=None)
        def slope(key):
            return potential.potential_gradient(spec, float(np.exp(key)), 0).value

        def g(z):
            keys = np.round(np.log(np.abs(z)), 9)
            return np.vectorize(slope)(keys)

        fit = asy.fit_growth(g, np.geomspace(1e-2, 1e-8, 8))
        self.assertAlmostEqual(fit.p_hat, -0.5, delta=1e-3)
        self.assertAlmostEqual(fit.q_hat, 0.0, delta=1e-2)


class TestHessian(unittest.TestCase):
    """Test cases for the compensated Hessian"""

    def test_constant_density(self):
        """Test H = I/2 for q = 1 without weight, at 0 and away from it"""
        spec = PotentialSpec(q=one)
        for z in (0.0, 0.3 + 0.2j):
            self.assertAlmostEqual(potential.potential_hessian(spec, z, 0, 0).value, 0.5, delta=1e-5)
            self.assertAlmostEqual(potential.potential_hessian(spec, z, 1, 1).value, 0.5, delta=1e-5)
            self.assertAlmostEqual(potential.potential_hessian(spec, z, 0, 1).value, 0.0, delta=1e-5)

    def test_trace_is_density(self):
        """Test the radial second derivatives and the Laplacian for alpha = 1/4"""
        spec = PotentialSpec(q=one, alpha=0.25)
        hxx = potential.potential_hessian(spec, 0.4, 0, 0).value
        hyy = potential.potential_hessian(spec, 0.4, 1, 1).value
        self.assertAlmostEqual(hxx, 0.5 * 0.4 ** -0.5 / 1.5, delta=1e-4)
        self.assertAlmostEqual(hyy, 0.4 ** -0.5 / 1.5, delta=1e-4)
        self.assertAlmostEqual(hxx + hyy, float(spec.density(0.4)), delta=1e-4)

    def test_errors(self):
        """Test Hoelder range and the origin restriction"""
        spec = PotentialSpec(q=one, alpha=0.25)
        with self.assertRaises(HolderExponentError):
            potential.potential_hessian(spec, 0.3, 0, 0, holder=1.5)
        with self.assertRaises(DomainError):
            potential.potential_hessian(spec, 0.0, 0, 0)
        with self.assertRaises(ParameterError):
            potential.potential_hessian(spec, 0.3, 0, 3)


class TestPoissonJensen(unittest.TestCase):
    """Test cases for the harmonic split"""

    def test_modulus_split(self):
        """Test that |z| minus the potential of 1/|z| is harmonic"""
        spec = PotentialSpec(q=one, alpha=0.5)
        split = potential.poisson_jensen_split(np.abs, spec, 1.0, n_pairs=2, n_points=8, seed=3)
        self.assertTrue(split.premise_ok)
        self.assertTrue(split.harmonic)
        self.assertLess(split.mean_value_error, 1e-4)
        self.assertAlmostEqual(float(split.h(0.4j)), 1.0, delta=1e-5)

    def test_premise_failure(self):
        """Test that a nonzero order skips the split"""
        with self.assertLogs('potential', level='WARNING'):
            split = potential.poisson_jensen_split(nitsche_family(0.3).u, one, 0.9)
        self.assertFalse(split.premise_ok)
        self.assertIsNone(split.harmonic)
        self.assertEqual(split.to_dict()['premise_ok'], False)


if __name__ == '__main__':
    unittest.main()
