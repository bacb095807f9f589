import unittest
import os
import json
import logging
import tempfile
from unittest.mock import patch

import numpy as np

# Import modules to test
import reports
from config import config
from errors import (DomainError, LabError, NonConvergenceError, ParameterError,
                    QuadratureBudgetError, UnknownEntryError)
from messages import Messages
from utils.helpers import format_value, format_verdicts, parse_complex, parse_kappa
from utils.logger import setup_logger


class TestReports(unittest.TestCase):
    """Test cases for report persistence"""

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)

    def test_encoding(self):
        """Test complex, non-finite and numpy values in JSON"""
        text = reports.dumps({'z': 1 + 2j, 'bad': float('nan'), 'big': np.inf,
                              'arr': np.array([1.5, 2.5]), 'flag': np.bool_(True)})
        data = json.loads(text)
        self.assertEqual(data['z'], {'re': 1.0, 'im': 2.0})
        self.assertEqual(data['bad'], 'nan')
        self.assertEqual(data['big'], 'inf')
        self.assertEqual(data['arr'], [1.5, 2.5])
        self.assertIs(data['flag'], True)

    def test_dumps_is_stable(self):
        """Test sorted keys and the payload digest"""
        a = reports.dumps({'b': 1, 'a': 2})
        b = reports.dumps({'a': 2, 'b': 1})
        self.assertEqual(a, b)
        self.assertEqual(reports.digest(a), reports.digest(b))

    def test_write_json_with_manifest(self):
        """Test that the manifest is embedded and records the output digest"""
        path = os.path.join(self.tmp.name, 'sub', 'report.json')
        manifest = reports.RunManifest.from_argv(['verify', 'yau'])
        success, message = reports.write_json(path, {'value': 0.1}, manifest)
        self.assertTrue(success)
        with open(path, encoding='utf-8') as fh:
            data = json.load(fh)
        self.assertEqual(data['value'], 0.1)
        self.assertEqual(data['manifest']['command_line'], ['verify', 'yau'])
        self.assertEqual(manifest.outputs[path], reports.file_digest(path))
        self.assertEqual([f for f in os.listdir(os.path.dirname(path)) if f.startswith('.tmp-')], [])

    def test_report_schemas(self):
        """Test required keys per report kind"""
        self.assertEqual(reports.validate_report('verify', {'target': 'yau'}), [])
        self.assertEqual(reports.validate_report('families', {'entry': {}, 'evaluation': {}}), [])
        self.assertEqual(len(reports.validate_report('potential', {'spec': {}})), 1)
        self.assertEqual(len(reports.validate_report('verify', {'target': 'yau', 'manifest': {}})), 1)
        self.assertEqual(len(reports.validate_report('plot', {})), 1)

    def test_write_json_rejects_invalid(self):
        """Test that a report failing its schema is not written"""
        path = os.path.join(self.tmp.name, 'potential.json')
        success, message = reports.write_json(path, {'spec': {}}, kind='potential')
        self.assertFalse(success)
        self.assertIn('deriv', message)
        self.assertFalse(os.path.exists(path))
        success, _ = reports.write_json(path, {'spec': {}, 'deriv': 'value', 'result': {}}, kind='potential')
        self.assertTrue(success)
        with open(path, encoding='utf-8') as fh:
            self.assertEqual(json.load(fh)['schema'], f'potential/{reports.VERSION}')

    def test_write_csv_full_precision(self):
        """Test that floats keep their repr"""
        path = os.path.join(self.tmp.name, 'rows.csv')
        success, _ = reports.write_csv(path, ('r', 'u'), [(0.1, 1.0 / 3.0)])
        self.assertTrue(success)
        with open(path, encoding='utf-8') as fh:
            lines = fh.read().splitlines()
        self.assertEqual(lines, ['r,u', f'0.1,{1.0 / 3.0!r}'])

    @patch('reports.sleep')
    def test_retry_on_io_error(self, mock_sleep):
        """Test that a transient OSError is retried"""
        calls = []

        @reports.retry_on_io_error
        def flaky():
            calls.append(1)
            if len(calls) == 1:
                raise OSError('busy')
            return 'ok'

        self.assertEqual(flaky(), 'ok')
        self.assertEqual(len(calls), 2)
        mock_sleep.assert_called_once_with(config.RETRY_DELAY)

    @patch('reports.sleep')
    @patch('reports.os.replace', side_effect=OSError('disk full'))
    def test_write_failure(self, mock_replace, mock_sleep):
        """Test that persistent failures are reported, not raised"""
        path = os.path.join(self.tmp.name, 'report.json')
        success, message = reports.write_json(path, {'value': 1})
        self.assertFalse(success)
        self.assertIn('disk full', message)
        self.assertEqual(mock_replace.call_count, config.MAX_RETRIES)
        self.assertFalse(os.path.exists(path))


class TestErrors(unittest.TestCase):
    """Test cases for the exit codes carried by errors"""

    def test_exit_codes(self):
        """Test usage and non-convergence codes"""
        self.assertEqual(LabError('x').exit_code, 1)
        self.assertEqual(DomainError('x').exit_code, 2)
        self.assertEqual(ParameterError('x').exit_code, 2)
        self.assertEqual(UnknownEntryError('x').exit_code, 2)
        self.assertEqual(NonConvergenceError('x').exit_code, 3)
        self.assertEqual(QuadratureBudgetError('x').exit_code, 3)


class TestHelpers(unittest.TestCase):
    """Test cases for argument parsing and formatting helpers"""

    def test_parse_complex(self):
        """Test 're,im' and literal forms"""
        self.assertEqual(parse_complex('0.5,-0.25'), complex(0.5, -0.25))
        self.assertEqual(parse_complex('0.1+0.2j'), complex(0.1, 0.2))
        self.assertEqual(parse_complex(' 0.3 '), complex(0.3, 0.0))
        with self.assertRaises(ParameterError):
            parse_complex('half')

    def test_parse_kappa(self):
        """Test constant curvature and catalog ids"""
        self.assertEqual(parse_kappa('const:-4'), ('const', -4.0))
        self.assertEqual(parse_kappa('nitsche'), ('catalog', 'nitsche'))
        with self.assertRaises(ParameterError):
            parse_kappa('const:minus')

    def test_format_value(self):
        """Test full-precision output"""
        self.assertEqual(format_value(0.1), '0.1')
        self.assertEqual(format_value(3), '3')

    def test_format_verdicts(self):
        """Test one line per claim"""
        text = format_verdicts({'w_z': {'verdict': 'pass'}, 'gap': 'fail'}, Messages())
        lines = text.splitlines()
        self.assertEqual(len(lines), 2)
        self.assertTrue(lines[0].startswith('w_z'))
        self.assertTrue(lines[1].endswith('fail'))


class TestConfig(unittest.TestCase):
    """Test cases for environment configuration"""

    @patch.dict(os.environ, {'LAB_TEST_VALUE': '2.5'})
    def test_env_float(self):
        """Test reading a float with a default"""
        self.assertEqual(config._env_float('LAB_TEST_VALUE', 1.0), 2.5)
        self.assertEqual(config._env_float('LAB_TEST_MISSING', 1.0), 1.0)

    @patch.dict(os.environ, {'LAB_TEST_VALUE': 'many'})
    def test_env_int_invalid(self):
        """Test that a malformed integer raises"""
        with self.assertRaises(ValueError):
            config._env_int('LAB_TEST_VALUE', 3)

    def test_defaults(self):
        """Test the documented defaults"""
        self.assertEqual(config.LADDER_K_MIN, 8)
        self.assertEqual(config.LADDER_K_MAX, 26)
        self.assertGreater(config.QUAD_NODE_CAP, 0)


class TestLogger(unittest.TestCase):
    """Test cases for logging setup"""

    def test_level_override(self):
        """Test that an explicit level wins and a log file is opened"""
        with tempfile.TemporaryDirectory() as tmp, patch('utils.logger.LOG_DIR', tmp):
            logger = setup_logger('debug')
            self.assertEqual(logger.level, logging.DEBUG)
            self.assertEqual(len(logger.handlers), 2)
            for handler in logger.handlers:
                handler.close()
            logger.handlers = []

    @patch.dict(os.environ, {'LAB_LOG_LEVEL': 'WARNING # quiet'})
    def test_level_from_environment(self):
        """Test that only the first word of the variable counts"""
        with tempfile.TemporaryDirectory() as tmp, patch('utils.logger.LOG_DIR', tmp):
            logger = setup_logger()
            self.assertEqual(logger.level, logging.WARNING)
            for handler in logger.handlers:
                handler.close()
            logger.handlers = []


class TestMessages(unittest.TestCase):
    """Test cases for message handling"""

    def test_default_language(self):
        """Test that default language is English"""
        msgs = Messages()
        self.assertEqual(msgs.language, 'en')

    def test_language_change(self):
        """Test changing language"""
        msgs = Messages('ru')
        self.assertEqual(msgs.language, 'ru')

    def test_get_message_en(self):
        """Test getting English messages"""
        msgs = Messages('en')
        self.assertEqual(msgs.get('verdict_pass'), "✅ all claims pass")

    def test_get_message_ru(self):
        """Test getting Russian messages"""
        msgs = Messages('ru')
        self.assertEqual(msgs.get('verdict_pass'), "✅ все утверждения выполнены")

    def test_message_with_params(self):
        """Test getting message with parameters"""
        msgs = Messages('en')
        result = msgs.get('catalog_header', count=14)
        self.assertEqual(result, "Catalog (14 entries):")

    def test_missing_translation(self):
        """Test that a key absent from a translation falls back to English"""
        msgs = Messages('ru')
        self.assertEqual(msgs.get('hypothesis_failed', failing='iv'), "нарушенные гипотезы: iv")
        self.assertEqual(msgs.get('written', path='a'), "Записано: a")
        self.assertTrue(msgs.get('order_line', alpha=1.0, stderr=0.01, branch='critical', raw=1.0)
                        .startswith('alpha_hat'))

    def test_fallback_to_english(self):
        """Test fallback to English for unknown language"""
        msgs = Messages('xx')  # Nonexistent language code
        self.assertEqual(msgs.get('verdict_fail'), "❌ claim failed")


if __name__ == '__main__':
    unittest.main()
