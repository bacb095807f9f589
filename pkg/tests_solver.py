import unittest

import numpy as np

import families
import grid as grd
import solver
from errors import DomainError, GridSizeError, NonConvergenceError, ParameterError
from metrics import CurvatureField


class TestSolveConfig(unittest.TestCase):
    """Test cases for solver configuration"""

    def test_rejects_bad_values(self):
        """Test that tol, max_iters and shift are validated"""
        with self.assertRaises(ParameterError):
            solver.SolveConfig(tol=0.0)
        with self.assertRaises(ParameterError):
            solver.SolveConfig(max_iters=0)
        with self.assertRaises(ParameterError):
            solver.SolveConfig(linearization_shift=-1.0)


class TestDirichletAnnulus(unittest.TestCase):
    """Test cases for the monotone iteration on annuli"""

    def setUp(self):
        self.grid = grd.build_grid(0.05, 0.5, 33, 32)

    def _solve(self, entry, cfg=None):
        return solver.solve_dirichlet_annulus(entry.kappa, solver.boundary_from(entry.u, self.grid),
                                              self.grid, cfg)

    def test_punctured_disk_oracle(self):
        """Test that the complete metric of curvature -4 is reproduced"""
        entry = families.hyperbolic_punctured_disk(4.0)
        field, trace = self._solve(entry)
        self.assertTrue(trace.converged)
        self.assertLess(np.max(np.abs(field.values - entry.u(self.grid.z))), 2e-3)
        self.assertLessEqual(trace.final_residual, 1e-10)

    def test_bracketing_every_iteration(self):
        """Test that iterates stay below the supersolution and decrease"""
        entry = families.hyperbolic_disk(4.0)
        _, trace = self._solve(entry)
        for record in trace.records:
            self.assertLessEqual(record.max_gap_to_supersolution, 1e-10)
            if trace.subsolution_discrete:
                self.assertGreaterEqual(record.min_gap_to_subsolution, -1e-10)

    def test_ahlfors_bound(self):
        """Test that a solution with data below the maximal solution stays below it"""
        entry = families.hyperbolic_disk(4.0)
        field, trace = self._solve(entry)
        self.assertTrue(trace.ahlfors['applicable'])
        self.assertTrue(trace.ahlfors['holds'])
        bound = solver.ahlfors_bound(self.grid, 4.0)
        self.assertTrue(np.all(field.values <= bound))

    def test_ahlfors_bound_is_sharp(self):
        """Test that the maximal solution meets the bound up to discretization error"""
        entry = families.hyperbolic_punctured_disk(4.0)
        _, trace = self._solve(entry)
        self.assertTrue(trace.ahlfors['applicable'])
        self.assertLess(trace.ahlfors['excess'], 5e-3)

    def test_trace_serializes(self):
        """Test the trace dictionary"""
        _, trace = self._solve(families.hyperbolic_disk(4.0))
        data = trace.to_dict()
        self.assertEqual(data['iterations'], len(data['records']))
        self.assertIn('residual_supnorm', data['records'][0])
        self.assertLess(data['alpha_boundary'], 0.99 + 1e-12)

    def test_nonnegative_curvature(self):
        """Test that kappa >= 0 is rejected"""
        with self.assertRaises(DomainError):
            solver.solve_dirichlet_annulus(CurvatureField.constant(0.0), (0.0, 0.0), self.grid)

    def test_iteration_limit(self):
        """Test that exhausting max_iters raises NonConvergenceError"""
        with self.assertRaises(NonConvergenceError):
            self._solve(families.hyperbolic_punctured_disk(4.0), solver.SolveConfig(max_iters=1))

    def test_disk_oracle_extrapolated(self):
        """Test the disk metric on [0.1, 0.9] at 257 rings within 1e-5"""
        entry = families.hyperbolic_disk(4.0)
        g = grd.build_grid(0.1, 0.9, 257, 16)
        field, trace = solver.solve_extrapolated(entry.kappa, solver.boundary_from(entry.u, g), g)
        self.assertTrue(trace.converged)
        self.assertLess(np.max(np.abs(field.values - np.log(1.0 / (1.0 - np.abs(g.z) ** 2)))), 1e-5)
        self.assertGreater(trace.richardson_correction, 0.0)

    def test_extrapolation_grid_sizes(self):
        """Test that Richardson needs odd rings and a multiple of 4 angles"""
        entry = families.hyperbolic_disk(4.0)
        g = grd.build_grid(0.1, 0.5, 16, 16)
        with self.assertRaises(GridSizeError):
            solver.solve_extrapolated(entry.kappa, solver.boundary_from(entry.u, g), g)

    def test_zero_data_gives_nonpositive_solution(self):
        """Test that kappa = -1 with zero boundary data stays below the supersolution 0"""
        g = grd.build_grid(0.3, 0.6, 17, 16)
        field, trace = solver.solve_dirichlet_annulus(CurvatureField.constant(-1.0), (0.0, 0.0), g)
        self.assertTrue(trace.converged)
        self.assertLessEqual(np.max(field.values), 1e-12)
        self.assertLess(np.min(field.values), 0.0)

    def test_refinement_ratio(self):
        """Test second-order convergence under grid halving"""
        rows, ratios = solver.refinement_study(families.hyperbolic_disk(4.0), 0.05, 0.5)
        self.assertEqual(len(rows), 3)
        for ratio in ratios:
            self.assertGreater(ratio, 3.5)


class TestRadial(unittest.TestCase):
    """Test cases for the radial Numerov solver"""

    def _check(self, entry, r_in, r_out, tol):
        bc = (float(entry.u(r_in)), float(entry.u(r_out)))
        profile = solver.solve_radial(entry.kappa, r_in, r_out, bc)
        error = np.max(np.abs(profile.u - entry.u(profile.r)))
        self.assertLess(error, tol, msg=entry.label)
        return profile

    def test_hyperbolic_disk(self):
        """Test the disk profile at n = 2049"""
        profile = self._check(families.hyperbolic_disk(4.0), 0.05, 0.9, 1e-6)
        self.assertEqual(len(profile.r), 2049)
        self.assertEqual(profile.method, 'newton')

    def test_punctured_disk(self):
        """Test the punctured-disk profile on [1e-3, 0.9] at n = 2049"""
        profile = self._check(families.hyperbolic_punctured_disk(4.0), 1e-3, 0.9, 1e-6)
        self.assertLessEqual(profile.residual, 1e-10)

    def test_stronger_curvature_stays_below(self):
        """Test that kappa = -4(1 + r) with punctured-disk data lies below that profile"""
        entry = families.hyperbolic_punctured_disk(4.0)
        bc = (float(entry.u(1e-3)), float(entry.u(0.9)))
        profile = solver.solve_radial(lambda z: -4.0 * (1.0 + np.abs(z)), 1e-3, 0.9, bc)
        self.assertLessEqual(profile.residual, 1e-10)
        self.assertTrue(np.all(profile.u <= entry.u(profile.r) + 1e-9))
        self.assertLess(np.min(profile.u[1:-1] - entry.u(profile.r[1:-1])), 0.0)

    def test_callable_profile(self):
        """Test the spline callable between nodes"""
        entry = families.hyperbolic_disk(4.0)
        profile = self._check(entry, 0.1, 0.6, 1e-6)
        u = profile.as_callable()
        self.assertAlmostEqual(float(u(0.333 * np.exp(1.0j))), float(entry.u(0.333)), places=6)

    def test_bad_inputs(self):
        """Test radial preconditions"""
        kappa = CurvatureField.constant(-4.0)
        with self.assertRaises(DomainError):
            solver.solve_radial(kappa, 0.5, 0.1, (0.0, 0.0))
        with self.assertRaises(GridSizeError):
            solver.solve_radial(kappa, 0.1, 0.5, (0.0, 0.0), n=3)
        with self.assertRaises(DomainError):
            solver.solve_radial(CurvatureField.constant(1.0), 0.1, 0.5, (0.0, 0.0))


class TestMaxPrinciple(unittest.TestCase):
    """Test cases for the comparison harness"""

    def _report(self, pair):
        g = grd.build_grid(1e-3, 0.9 * pair.outer_radius, 33, 32)
        return solver.check_max_principle(pair.u1, pair.u2, pair.kappa, g, outer_radius=pair.outer_radius)

    def test_theorem_pair(self):
        """Test that the rescaled pair passes every hypothesis"""
        report = self._report(families.theorem_pair(0.5, 4.0, 2.0))
        self.assertEqual(report.failing, [])
        self.assertTrue(report.conclusion_holds)
        self.assertGreaterEqual(report.min_gap, 0.0)

    def test_superharmonic_counterexample(self):
        """Test that only hypothesis (i) fails and the conclusion breaks"""
        report = self._report(families.counterexample('maxprin-superharmonic'))
        self.assertEqual(report.failing, ['i'])
        self.assertLess(report.min_gap, 0.0)
        self.assertFalse(report.conclusion_holds)

    def test_infinite_order_counterexample(self):
        """Test that only hypothesis (iv) fails and the conclusion breaks"""
        with np.errstate(over='raise'):
            report = self._report(families.counterexample('maxprin-order-infty'))
        self.assertEqual(report.failing, ['iv'])
        self.assertGreaterEqual(report.hypotheses['i']['subharmonic_margin'], 0.0)
        self.assertTrue(np.isfinite(report.hypotheses['i']['supersolution_margin']))
        self.assertFalse(report.hypotheses['iv']['u2_order_finite'])
        self.assertLess(report.min_gap, 0.0)

    def test_slack_covers_zeros_of_u(self):
        """Test that a node where u vanishes gets the tolerance of its ring"""
        z = grd.build_grid(1e-3, 0.9, 9, 32).z
        u = np.real(z) / np.abs(z) ** 2
        slack = solver._slack(u, z, np.zeros(z.shape))
        ring = 1.0 + np.max(np.abs(u), axis=1) / np.abs(z[:, 0]) ** 2
        np.testing.assert_allclose(slack[:, 8], solver.HYPOTHESIS_TOL * ring)

    def test_report_dict(self):
        """Test the report dictionary"""
        data = self._report(families.counterexample('maxprin-superharmonic')).to_dict()
        self.assertEqual(set(data['hypotheses']), {'i', 'ii', 'iii', 'iv'})
        self.assertEqual(data['failing'], ['i'])


if __name__ == '__main__':
    unittest.main()
