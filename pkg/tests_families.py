import unittest
from dataclasses import replace

import numpy as np

import families
import grid as grd
from errors import ParameterError, UnknownEntryError
from metrics import CurvatureField


class TestCatalog(unittest.TestCase):
    """Test cases for catalog listing and lookup"""

    def test_list_entries(self):
        """Test that the listing carries the families and all counterexamples"""
        entries = families.list_entries()
        ids = [e.id for e in entries]
        self.assertGreaterEqual(len(entries), 12)
        self.assertEqual(ids.count('nitsche'), 7)
        for name in families.COUNTEREXAMPLES:
            self.assertIn(name, ids)
        self.assertIn('maxprin-theorem', ids)

    def test_unknown_id(self):
        """Test that an unknown id raises UnknownEntryError"""
        with self.assertRaises(UnknownEntryError):
            families.get_entry('nope')

    def test_inline_beta(self):
        """Test the 'alpha1-holder-rate(beta)' syntax"""
        entry = families.counterexample('alpha1-holder-rate(0.5)')
        self.assertEqual(entry.params['beta'], 0.5)
        self.assertIs(entry, families.counterexample('alpha1-holder-rate', beta=0.5))
        with self.assertRaises(ParameterError):
            families.counterexample('alpha1-holder-rate(x)')

    def test_parameter_ranges(self):
        """Test out-of-range family parameters"""
        with self.assertRaises(ParameterError):
            families.nitsche_family(1.5)
        with self.assertRaises(ParameterError):
            families.supersolution_family(1.0)
        with self.assertRaises(ParameterError):
            families.subsolution_family(0.5, 4.0, 0.5)
        with self.assertRaises(ParameterError):
            families.hyperbolic_disk(-1.0)
        with self.assertRaises(ParameterError):
            families.nitsche_pullback(0.5)

    def test_records(self):
        """Test that records are JSON-ready dicts"""
        record = families.nitsche_family(0.75).record()
        self.assertEqual(record['id'], 'nitsche(alpha=0.75)')
        self.assertTrue(record['has_closed_derivatives'])
        pair = families.counterexample('maxprin-order-infty').record()
        self.assertEqual(pair['expected_failure'], 'iv')


class TestClosedForms(unittest.TestCase):
    """Test cases for closed-form values"""

    def test_critical_nitsche_values(self):
        """Test u, w and w_z of the order-one member at z = 1/e"""
        entry = families.nitsche_family(1.0)
        z = np.exp(-1.0)
        self.assertAlmostEqual(float(entry.u(z)), 1.0 - np.log(4.0), places=12)
        self.assertAlmostEqual(float(entry.remainder(z)), np.log(0.25), places=12)
        self.assertAlmostEqual(complex(entry.remainder_z(z)).real, -np.e / 4.0, places=12)

    def test_u_z_matches_differencing(self):
        """Test the closed-form d/dz u against the numeric Wirtinger derivative"""
        for alpha in (-1.0, 0.0, 0.3, 0.75, 1.0):
            entry = families.nitsche_family(alpha)
            z = 0.2 * np.exp(0.9j)
            self.assertLess(abs(entry.u_z(z) - grd.dz(entry.u, z)), 1e-7, msg=f'alpha={alpha}')

    def test_remainder_zz_matches_differencing(self):
        """Test remainder second derivatives against nested differencing"""
        for entry in (families.nitsche_family(0.3), families.nitsche_family(1.0),
                      families.curvature_barrier(1.0, 0.5)):
            z = 0.1 * np.exp(0.4j)
            numeric = grd.dzz(entry.remainder, z)
            self.assertLess(abs(entry.remainder_zz(z) - numeric), 1e-5, msg=entry.label)

    def test_pullback_agrees_with_closed_form(self):
        """Test that the pullback construction reproduces the non-positive branch"""
        for alpha in (-1.0, -0.5, 0.0):
            closed = families.nitsche_family(alpha)
            pulled = families.nitsche_pullback(alpha)
            z = np.array([0.1 + 0.05j, -0.3j, 0.6 * np.exp(2.0j)])
            np.testing.assert_allclose(pulled.u(z), closed.u(z), rtol=1e-10, atol=1e-12)

    def test_sub_below_super(self):
        """Test that the rescaled subsolution lies below the supersolution"""
        pair = families.theorem_pair(0.5, 4.0, 2.0)
        z = np.geomspace(1e-6, 0.95, 30) * np.exp(0.3j)
        self.assertTrue(np.all(pair.u1(z) <= pair.u2(z)))

    def test_barrier_curvature_limit(self):
        """Test that barrier curvature tends to -1 at 0"""
        entry = families.curvature_barrier(1.0, 0.5)
        self.assertAlmostEqual(float(entry.kappa(1e-200)), -1.0, places=2)


class TestResidualOracle(unittest.TestCase):
    """Test cases for the residual oracle and quarantine"""

    def test_catalog_residuals(self):
        """Test that every closed-form entry solves its equation to 1e-4"""
        for entry in families.list_entries():
            if isinstance(entry, families.MaxPrinciplePair):
                continue
            report = families.residual(entry)
            self.assertTrue(report.passed, msg=f'{entry.label}: {report.max_residual:.3e}')
            self.assertEqual(report.n_points, 100)

    def test_kinked_entry_residual(self):
        """Test that the entry non-smooth on Re z = 0 is sampled clear of the kink"""
        entry = families.counterexample('alpha-half-sharp')
        z = families.sample_points(100, rho=entry.rho)
        self.assertTrue(np.all(entry.rho(z) >= families.SMOOTH_MARGIN * np.abs(z)))
        self.assertTrue(np.all(grd.laplacian_step(z, entry.rho(z)) >= 1e-2))
        report = families.residual(entry)
        self.assertLess(report.max_residual, families.RESIDUAL_TOL)

    def test_printed_kappa_drift(self):
        """Test that the derived curvature matches the printed formula"""
        report = families.residual(families.counterexample('alpha1-bounded-kappa'))
        self.assertLess(report.max_kappa_discrepancy, 1e-4)

    def test_quarantine(self):
        """Test that a wrong curvature is quarantined with a warning"""
        broken = replace(families.nitsche_family(0.3), kappa=CurvatureField.constant(-3.0))
        with self.assertLogs('families', level='WARNING'):
            checked = families.validate(broken)
        self.assertEqual(checked.status, families.QUARANTINED)

    def test_sample_points_deterministic(self):
        """Test that sampling is seeded and respects the radius window"""
        a = families.sample_points(50, seed=7)
        b = families.sample_points(50, seed=7)
        np.testing.assert_array_equal(a, b)
        self.assertTrue(np.all((np.abs(a) >= 1e-3) & (np.abs(a) <= 0.9)))

    def test_eval_record(self):
        """Test point evaluation with the local residual"""
        record = families.eval_record(families.nitsche_family(1.0), complex(np.exp(-1.0)))
        self.assertIn('w_z_re', record)
        self.assertLess(record['residual'], 1e-6)
        pair_record = families.eval_record(families.counterexample('maxprin-order-infty'), 0.5)
        self.assertAlmostEqual(pair_record['u2'], 2.0)


if __name__ == '__main__':
    unittest.main()
