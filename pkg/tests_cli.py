import io
import os
import json
import tempfile
import unittest
from unittest.mock import patch

import main


def run(*argv):
    """Run the CLI, returning (exit code, stdout)"""
    with patch('sys.stdout', new_callable=io.StringIO) as out, patch('sys.stderr', new_callable=io.StringIO):
        code = main.main(list(argv))
    return code, out.getvalue()


class TestUsage(unittest.TestCase):
    """Test cases for argument handling and usage errors"""

    def test_missing_arguments(self):
        """Test that argparse errors map to exit 2"""
        code, _ = run('solve')
        self.assertEqual(code, main.EXIT_USAGE)

    def test_help(self):
        """Test that --help exits 0"""
        code, _ = run('--help')
        self.assertEqual(code, main.EXIT_OK)

    def test_unknown_entry(self):
        """Test that an unknown catalog id exits 2"""
        code, _ = run('families', 'eval', '--id', 'nope', '--z', '0.5,0')
        self.assertEqual(code, 2)

    def test_nonnegative_constant_curvature(self):
        """Test that const:0 is a domain error"""
        code, _ = run('solve', '--kappa', 'const:0')
        self.assertEqual(code, 2)

    def test_bad_tolerance(self):
        """Test that tol = 0 is a parameter error"""
        code, _ = run('solve', '--kappa', 'const:-4', '--tol', '0')
        self.assertEqual(code, 2)

    def test_log2_radius(self):
        """Test that the log2 weight refuses r = 1"""
        code, _ = run('potential', '--weight', 'log2', '--r', '1')
        self.assertEqual(code, 2)


class TestCommands(unittest.TestCase):
    """Test cases for successful runs"""

    def test_handler_modules_are_registered(self):
        """Test that the command modules, not the catalog, are bound in main"""
        import handlers
        import families
        self.assertTrue(hasattr(main.families_handler, 'register'))
        self.assertIsNot(main.families_handler, families)
        self.assertIs(handlers.catalog, families)

    def test_families_list(self):
        """Test the catalog listing"""
        code, out = run('families', 'list')
        self.assertEqual(code, main.EXIT_OK)
        self.assertIn('nitsche(alpha=1)', out)

    def test_families_list_json(self):
        """Test that --json prints the payload with the run manifest"""
        code, out = run('--json', 'families', 'list')
        self.assertEqual(code, main.EXIT_OK)
        data = json.loads(out)
        self.assertIn('entries', data)
        self.assertEqual(data['manifest']['command_line'], ['--json', 'families', 'list'])

    def test_potential_value(self):
        """Test omega(0) = -1/4 and the report written under --out"""
        with tempfile.TemporaryDirectory() as tmp:
            code, out = run('--json', '--out', tmp, 'potential', '--q', 'one', '--alpha', '0')
            self.assertEqual(code, main.EXIT_OK)
            self.assertAlmostEqual(json.loads(out)['result']['value'], -0.25, delta=1e-5)
            self.assertTrue(os.path.exists(os.path.join(tmp, 'potential.json')))

    def test_potential_constant_density(self):
        """Test --q const:V and --deriv none"""
        with tempfile.TemporaryDirectory() as tmp:
            code, out = run('--json', '--out', tmp, 'potential', '--q', 'const:1', '--alpha', '0',
                            '--deriv', 'none')
            self.assertEqual(code, main.EXIT_OK)
            data = json.loads(out)
            self.assertEqual(data['deriv'], 'none')
            self.assertAlmostEqual(data['result']['value'], -0.25, delta=1e-5)
        code, _ = run('potential', '--q', 'const:one')
        self.assertEqual(code, main.EXIT_USAGE)

    def test_solve_grid_flags(self):
        """Test --rmin, --rmax, --nr and --ntheta alongside the long spellings"""
        with tempfile.TemporaryDirectory() as tmp:
            code, out = run('--json', '--out', tmp, 'solve', '--kappa', 'const:-4', '--rmin', '0.1',
                            '--rmax', '0.5', '--nr', '17', '--ntheta', '16')
            self.assertEqual(code, main.EXIT_OK)
            self.assertEqual(json.loads(out)['grid'], {'r_min': 0.1, 'r_max': 0.5, 'n_radial': 17, 'n_angular': 16})
            code, out = run('--json', '--out', tmp, 'solve', '--kappa', 'const:-4', '--r-min', '0.1',
                            '--n-radial', '17', '--n-angular', '16', '--richardson')
            self.assertEqual(code, main.EXIT_OK)
            self.assertIsNotNone(json.loads(out)['trace']['richardson_correction'])

    def test_radial_solve_writes_files(self):
        """Test that a radial solve writes its CSV and JSON"""
        with tempfile.TemporaryDirectory() as tmp:
            code, _ = run('--out', tmp, 'solve', '--kappa', 'const:-4', '--radial', '--n', '257')
            self.assertEqual(code, main.EXIT_OK)
            with open(os.path.join(tmp, 'solve_const-4_radial.json'), encoding='utf-8') as fh:
                data = json.load(fh)
            self.assertLess(data['sup_error'], 1e-4)
            self.assertIn('manifest', data)
            self.assertTrue(os.path.exists(os.path.join(tmp, 'solve_const-4_radial.csv')))


class TestExitContract(unittest.TestCase):
    """Test cases for claim verdicts and exit codes"""

    def test_failed_claim(self):
        """Test that a failing claim exits 4"""
        code, out = run('verify', 'continuity', '--id', 'alpha1-bounded-kappa')
        self.assertEqual(code, main.EXIT_FAILED_CLAIM)
        self.assertIn('claim failed', out)

    def test_expected_failure(self):
        """Test that --expect-fail turns the failing claim into exit 0"""
        code, out = run('--expect-fail', 'verify', 'continuity', '--id', 'alpha1-bounded-kappa')
        self.assertEqual(code, main.EXIT_OK)
        self.assertIn('failed as expected', out)

    def test_expected_failure_that_passes(self):
        """Test that --expect-fail on a passing claim exits 4"""
        code, _ = run('--expect-fail', 'verify', 'continuity', '--id', 'nitsche', '--alpha', '1')
        self.assertEqual(code, main.EXIT_FAILED_CLAIM)

    def test_max_principle_is_a_verdict(self):
        """Test that failing hypotheses are reported with exit 0"""
        code, out = run('--json', 'verify', 'max-principle', '--pair', 'maxprin-superharmonic')
        self.assertEqual(code, main.EXIT_OK)
        data = json.loads(out)
        self.assertEqual(data['failing'], ['i'])
        self.assertTrue(data['matches_expected_failure'])

    @patch('main.log_critical_error')
    @patch('families.list_entries', side_effect=RuntimeError('boom'))
    def test_unexpected_error(self, mock_list, mock_critical):
        """Test that an unexpected exception exits 1 and is logged as critical"""
        code, _ = run('families', 'list')
        self.assertEqual(code, main.EXIT_UNEXPECTED)
        mock_critical.assert_called_once()


if __name__ == '__main__':
    unittest.main()
