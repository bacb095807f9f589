import unittest
from dataclasses import replace

import numpy as np

import asymptotics as asy
import families
from errors import BranchMismatchError, ParameterError, SpanTooSmallError


class TestOrderEstimate(unittest.TestCase):
    """Test cases for the order estimate"""

    def test_recovers_declared_order(self):
        """Test the estimated order across the explicit family"""
        for alpha in (-1.0, 0.0, 0.3, 0.5, 0.9, 1.0):
            alpha_hat, stderr = asy.estimate_order(families.nitsche_family(alpha).u)
            self.assertLess(abs(alpha_hat - alpha), 1e-2, msg=f'alpha={alpha}')
            self.assertGreater(stderr, 0.0)

    def test_critical_branch(self):
        """Test that the order-one member is classified critical with the log log correction"""
        estimate = asy.order_details(families.nitsche_family(1.0).u)
        self.assertEqual(estimate.branch, asy.CRITICAL)
        self.assertTrue(estimate.critical_corrected)
        self.assertTrue(estimate.finite)

    def test_subcritical_near_one(self):
        """Test that orders just below one keep the raw slope"""
        estimate = asy.order_details(lambda z: -0.95 * np.log(np.abs(z)) + 3.0)
        self.assertAlmostEqual(estimate.alpha_hat, 0.95, places=6)
        self.assertFalse(estimate.critical_corrected)
        self.assertEqual(estimate.branch, asy.SUBCRITICAL)
        self.assertGreater(estimate.log_drift, 1.0 + asy.CRITICAL_DRIFT_TOL)
        for alpha in (0.93, 0.945, 0.96):
            estimate = asy.order_details(lambda z, a=alpha: -a * np.log(np.abs(z)))
            self.assertAlmostEqual(estimate.alpha_hat, alpha, places=6)
        estimate = asy.order_details(families.nitsche_family(0.96).u)
        self.assertFalse(estimate.critical_corrected)
        self.assertEqual(estimate.branch, asy.SUBCRITICAL)
        self.assertLess(estimate.alpha_hat, 0.97)

    def test_critical_log_drift(self):
        """Test that order-one members drift like 1/log(1/r)"""
        for entry in (families.nitsche_family(1.0), families.counterexample('alpha1-holder-rate')):
            estimate = asy.order_details(entry.u)
            self.assertLess(abs(estimate.log_drift - 1.0), asy.CRITICAL_DRIFT_TOL, msg=entry.id)
            self.assertTrue(estimate.critical_corrected, msg=entry.id)

    def test_unbounded_curvature_order(self):
        """Test that the order-1/2 solution with unbounded curvature is still recognized"""
        alpha_hat, _ = asy.estimate_order(families.counterexample('kappa-unbounded').u)
        self.assertLess(abs(alpha_hat - 0.5), 0.05)

    def test_short_ladder(self):
        """Test that too narrow a span raises SpanTooSmallError"""
        with self.assertRaises(SpanTooSmallError):
            asy.estimate_order(families.nitsche_family(0.3).u, radii=np.array([0.1, 0.05, 0.02]))
        with self.assertRaises(SpanTooSmallError):
            asy.estimate_order(families.nitsche_family(0.3).u, radii=np.geomspace(0.1, 0.01, 8))

    def test_max_on_circle_refines(self):
        """Test that the refinement finds a maximum between scan nodes"""
        peak = asy.max_on_circle(lambda z: np.cos(np.angle(z) - 0.01), 0.5)
        self.assertAlmostEqual(peak, 1.0, places=9)
        with self.assertRaises(ParameterError):
            asy.max_on_circle(np.abs, 0.5, n_theta=16)


class TestRemainder(unittest.TestCase):
    """Test cases for remainder construction"""

    def test_branch_mismatch(self):
        """Test that a branch inconsistent with the order raises"""
        u = families.nitsche_family(0.5).u
        with self.assertRaises(BranchMismatchError):
            asy.remainder(u, 0.5, asy.CRITICAL)
        with self.assertRaises(BranchMismatchError):
            asy.remainder(u, 1.0, asy.SUBCRITICAL)
        with self.assertRaises(BranchMismatchError):
            asy.remainder(u, 0.5, 'sideways')

    def test_numeric_remainder_matches_closed(self):
        """Test that u + alpha log|z| reproduces the closed-form remainder"""
        entry = families.nitsche_family(0.3)
        v = asy.remainder(entry.u, 0.3, asy.SUBCRITICAL)
        z = np.array([0.1j, 0.02 + 0.01j])
        np.testing.assert_allclose(v(z), entry.remainder(z), atol=1e-12)


class TestGrowthFit(unittest.TestCase):
    """Test cases for growth fits and verdicts"""

    def test_recovers_exponents(self):
        """Test p and q on |z|^-1/2 log(1/|z|)"""
        fit = asy.fit_growth(lambda z: np.abs(z) ** -0.5 * np.log(1.0 / np.abs(z)), asy.rate_ladder(30))
        self.assertAlmostEqual(fit.p_hat, -0.5, places=6)
        self.assertAlmostEqual(fit.q_hat, 1.0, places=5)
        self.assertFalse(fit.indeterminate)

    def test_log_correction_factor(self):
        """Test that a 1 + 1/log(1/|z|) factor does not bias q"""
        def g(z):
            L = np.log(1.0 / np.abs(z))
            return 1.0 / (2.0 * np.abs(z) * L * (1.0 + L))

        fit = asy.fit_growth(g)
        self.assertAlmostEqual(fit.p_hat, -1.0, delta=1e-3)
        self.assertLess(abs(fit.q_hat + 2.0), asy.RATE_TOL)
        verdict = asy.bound_verdict(fit, -1.0, -2.0)
        self.assertEqual(verdict['verdict'], asy.PASS)
        self.assertTrue(verdict['sharp'])

    def test_trivial_fit(self):
        """Test that g = 0 gives a trivial fit and a passing verdict"""
        fit = asy.fit_growth(lambda z: np.zeros(np.shape(z)), asy.rate_ladder(20))
        self.assertTrue(fit.trivial)
        self.assertEqual(asy.bound_verdict(fit, -1.0, 0.0)['verdict'], asy.PASS)

    def test_bound_verdicts(self):
        """Test pass, sharp pass and fail for |z|^-1"""
        fit = asy.fit_growth(lambda z: 1.0 / np.abs(z), asy.rate_ladder(30))
        self.assertEqual(asy.bound_verdict(fit, -2.0, 0.0)['verdict'], asy.PASS)
        sharp = asy.bound_verdict(fit, -1.0, 0.0)
        self.assertEqual(sharp['verdict'], asy.PASS)
        self.assertTrue(sharp['sharp'])
        self.assertEqual(asy.bound_verdict(fit, -0.5, 0.0)['verdict'], asy.FAIL)

    def test_span_too_small(self):
        """Test that a fit needs five decades"""
        with self.assertRaises(SpanTooSmallError):
            asy.fit_growth(np.abs, np.geomspace(0.1, 1e-3, 10))

    def test_ladders(self):
        """Test ladder endpoints"""
        self.assertEqual(asy.default_ladder()[0], 2.0 ** -8)
        self.assertEqual(asy.default_ladder()[-1], 2.0 ** -26)
        self.assertAlmostEqual(asy.rate_ladder()[-1], 1e-60)
        self.assertEqual(len(asy.limit_ladder()), 7)


class TestExtrapolation(unittest.TestCase):
    """Test cases for limit extrapolation"""

    def test_critical_polynomial(self):
        """Test that a quadratic in 1/log(1/r) is extrapolated exactly"""
        radii = asy.rate_ladder(20)
        t = 1.0 / np.log(1.0 / radii)
        values = 0.7 + 2.0 * t - 3.0 * t ** 2
        self.assertAlmostEqual(asy.extrapolate_critical(radii, values), 0.7, places=10)

    def test_aitken_geometric(self):
        """Test Aitken on a geometric sequence"""
        values = [1.0 + 0.5 ** k for k in range(1, 6)]
        self.assertAlmostEqual(asy.aitken(values), 1.0, places=12)

    def test_aitken_constant(self):
        """Test that a settled sequence is returned unchanged"""
        self.assertEqual(asy.aitken([2.0, 2.0, 2.0]), 2.0)

    def test_convexity_of_circle_max(self):
        """Test that M_u of a subharmonic function is convex in log r"""
        u = families.nitsche_family(0.75).u
        self.assertGreaterEqual(asy.circle_max_convexity(u, np.geomspace(0.5, 1e-6, 12)), -1e-8)


class TestMainTheorem(unittest.TestCase):
    """Test cases for the derivative rate table"""

    def test_closed_forms_pass(self):
        """Test that explicit members satisfy every rate claim"""
        for alpha in (-1.0, 0.3, 0.75, 1.0):
            report = asy.verify_main_theorem(families.nitsche_family(alpha))
            self.assertTrue(report.passed, msg=f'alpha={alpha}: {report.rate_verdicts}')
            self.assertEqual(report.branch, asy.CRITICAL if alpha == 1.0 else asy.SUBCRITICAL)

    def test_critical_remainder_limit(self):
        """Test that w(0) = log(1/2) for the order-one member"""
        report = asy.verify_main_theorem(families.nitsche_family(1.0))
        self.assertAlmostEqual(report.limit_values['w(0)'], np.log(0.5), delta=1e-2)
        self.assertIn('w_zzbar', report.fits)

    def test_negative_order_records_power(self):
        """Test that alpha < 0 records the sharper power bound"""
        report = asy.verify_main_theorem(families.nitsche_family(-1.0))
        self.assertEqual(report.rate_verdicts['v_z_power']['verdict'], asy.RECORDED)

    def test_derivatives_are_differenced(self):
        """Test that rate fits come from differencing the extracted remainder"""
        report = asy.verify_main_theorem(families.nitsche_family(1.0))
        for name in ('w_z', 'w_zz'):
            fit = report.fits[name]
            self.assertIn(fit['derivative_source'], ('numeric', 'numeric+closed-form'))
            self.assertLess(fit['closed_form_agreement'], asy.AGREEMENT_TOL)
            self.assertLessEqual(fit['resolved_to'], 1e-6)
        self.assertEqual(report.fits['w_zzbar']['derivative_source'], 'equation')

    def test_mismatched_closed_form_is_not_used(self):
        """Test that a closed form disagreeing with differencing is reported and ignored"""
        entry = families.nitsche_family(0.75)
        wrong = replace(entry, remainder_z=lambda z: 2.0 * entry.remainder_z(z))
        report = asy.verify_main_theorem(wrong)
        self.assertEqual(report.fits['v_z']['derivative_source'], 'numeric')
        self.assertGreater(report.fits['v_z']['closed_form_agreement'], 0.5)
        self.assertTrue(any('departs from differencing' in note for note in report.notes))
        self.assertEqual(report.rate_verdicts['v_z']['verdict'], asy.PASS)

    def test_report_dict(self):
        """Test the report dictionary"""
        data = asy.verify_main_theorem(families.nitsche_family(0.75)).to_dict()
        self.assertEqual(data['alpha_declared'], 0.75)
        self.assertEqual(data['confidence'], 'high')
        self.assertTrue(data['passed'])


class TestGeometricLimits(unittest.TestCase):
    """Test cases for density, connection and Schwarzian limits"""

    def test_subcritical(self):
        """Test the limits for order 0.3"""
        m = families.nitsche_family(0.3).density()
        report = asy.verify_geometric_limits(m, -4.0, 0.3)
        self.assertTrue(report.passed, msg=str(report.limits))
        self.assertAlmostEqual(report.targets['c'], 0.3 * 1.7 / 2.0)

    def test_critical(self):
        """Test the limits for order one"""
        m = families.nitsche_family(1.0).density()
        report = asy.verify_geometric_limits(m, -4.0, 1.0)
        self.assertTrue(report.passed, msg=str(report.limits))
        self.assertAlmostEqual(report.targets['a'], 0.5)

    def test_positive_kappa0(self):
        """Test that kappa(0) >= 0 is rejected"""
        with self.assertRaises(ParameterError):
            asy.verify_geometric_limits(families.nitsche_family(1.0).density(), 0.0, 1.0)

    def test_yau_ratios(self):
        """Test that the order-one member is asymptotic to the punctured-disk metric"""
        report = asy.verify_yau_ratios(families.nitsche_family(1.0).density())
        self.assertTrue(report.passed, msg=str(report.limits))

    def test_yau_precondition(self):
        """Test that an incomplete metric fails the precondition"""
        report = asy.verify_yau_ratios(families.nitsche_family(0.5).density())
        self.assertEqual(report.status, asy.PRECONDITION_FAILED)
        self.assertFalse(report.passed)


class TestCriticalChecks(unittest.TestCase):
    """Test cases for the order-one growth and continuity checks"""

    def test_wachstum_bounded(self):
        """Test that B(r) tends to 2 for the order-one member"""
        entry = families.nitsche_family(1.0)
        report = asy.wachstum_check(entry.u, entry.kappa)
        self.assertTrue(report.passed)
        self.assertAlmostEqual(report.limits['B'], 2.0, delta=0.1)

    def test_wachstum_vanishes(self):
        """Test that B vanishes for the punctured-disk metric"""
        entry = families.hyperbolic_punctured_disk(4.0)
        report = asy.wachstum_check(entry.u, entry.kappa)
        self.assertTrue(report.passed)
        self.assertLess(max(report.sequences['B']), 1e-10)

    def test_continuity(self):
        """Test that w tends to -log 2 with vanishing gap"""
        entry = families.nitsche_family(1.0)
        report = asy.critical_continuity_check(entry.u, entry.kappa)
        self.assertTrue(report.passed)
        self.assertAlmostEqual(report.limits['w'], -np.log(2.0), delta=6e-2)
        self.assertAlmostEqual(report.targets['w'], -np.log(2.0))

    def test_bounded_kappa_counterexample(self):
        """Test that bounded curvature alone does not give a continuous remainder"""
        entry = families.counterexample('alpha1-bounded-kappa')
        report = asy.critical_continuity_check(entry.u, entry.kappa)
        self.assertFalse(report.passed)
        self.assertEqual(report.verdicts['gap'], asy.FAIL)


if __name__ == '__main__':
    unittest.main()
