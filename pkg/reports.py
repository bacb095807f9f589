import io
import os
import csv
import sys
import json
import math
import hashlib
import logging
import tempfile
from functools import wraps
from time import sleep
from datetime import datetime, timezone
from dataclasses import dataclass, field

import numpy as np

from config.config import MAX_RETRIES, RETRY_DELAY

logger = logging.getLogger(__name__)

VERSION = '1.0.0'

# Required top-level keys per report kind; any one alternative must be complete
REPORT_SCHEMAS = {
    'families': ({'entries'}, {'entry', 'evaluation'}),
    'curvature': ({'id', 'points'},),
    'classify': ({'id', 'order', 'remainder_samples', 'completeness'},),
    'solve': ({'mode', 'kappa', 'grid', 'trace'}, {'mode', 'kappa', 'method', 'residual'}),
    'verify': ({'target'},),
    'potential': ({'spec', 'deriv', 'result'},),
}
MANIFEST_KEYS = {'command_line', 'deterministic', 'version', 'started_utc', 'inputs', 'outputs'}


def retry_on_io_error(func):
    """Decorator to retry report writes on transient OS errors"""
    @wraps(func)
    def wrapper(*args, **kwargs):
        retries = 0
        last_error = None

        while retries < MAX_RETRIES:
            try:
                return func(*args, **kwargs)
            except OSError as e:
                last_error = e
                retries += 1
                if retries < MAX_RETRIES:
                    logger.warning(f"Report write failed, attempt {retries} of {MAX_RETRIES}: {e}")
                    sleep(RETRY_DELAY)
                continue

        logger.error(f"Report write failed after {MAX_RETRIES} attempts: {last_error}")
        raise last_error

    return wrapper


def _encode(value):
    """Plain JSON types; complex as {re, im}, non-finite floats as strings"""
    if isinstance(value, dict):
        return {str(k): _encode(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_encode(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_encode(v) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (complex, np.complexfloating)):
        return {'re': _encode(float(value.real)), 'im': _encode(float(value.imag))}
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isfinite(value):
            return value
        return 'nan' if math.isnan(value) else ('inf' if value > 0 else '-inf')
    if hasattr(value, 'to_dict'):
        return _encode(value.to_dict())
    return value


def dumps(payload):
    """Stable JSON: sorted keys, round-trip float repr"""
    return json.dumps(_encode(payload), sort_keys=True, indent=2, ensure_ascii=False)


def digest(data):
    if isinstance(data, str):
        data = data.encode('utf-8')
    return hashlib.sha256(data).hexdigest()


def file_digest(path):
    h = hashlib.sha256()
    with open(path, 'rb') as fh:
        for chunk in iter(lambda: fh.read(65536), b''):
            h.update(chunk)
    return h.hexdigest()


@dataclass
class RunManifest:
    """Provenance of one CLI run; embedded in every report it writes"""
    command_line: list
    deterministic: bool = True
    version: str = VERSION
    started_utc: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat())
    finished_utc: str = None
    inputs: dict = field(default_factory=dict)
    outputs: dict = field(default_factory=dict)

    @classmethod
    def from_argv(cls, argv=None):
        argv = list(sys.argv[1:] if argv is None else argv)
        return cls(command_line=argv, inputs={'argv': digest(' '.join(argv))})

    def add_output(self, path):
        self.outputs[str(path)] = file_digest(path)

    def finish(self):
        self.finished_utc = datetime.now(timezone.utc).isoformat()
        return self

    def to_dict(self):
        return {'command_line': self.command_line, 'deterministic': self.deterministic,
                'version': self.version, 'started_utc': self.started_utc,
                'finished_utc': self.finished_utc, 'inputs': self.inputs, 'outputs': self.outputs}


@retry_on_io_error
def _atomic_write(path, text):
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix='.tmp-', suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, 'w', encoding='utf-8', newline='') as fh:
            fh.write(text)
        os.replace(tmp, path)
    finally:
        if os.path.exists(tmp):
            os.remove(tmp)


def validate_report(kind, body):
    """Problems found in a report body against REPORT_SCHEMAS (empty when valid)"""
    alternatives = REPORT_SCHEMAS.get(kind)
    if alternatives is None:
        return [f"unknown report kind {kind!r}"]
    keys = set(body)
    problems = []
    if not any(required <= keys for required in alternatives):
        closest = min(alternatives, key=lambda required: len(required - keys))
        problems.append(f"{kind} report lacks {sorted(closest - keys)}")
    if 'manifest' in body:
        missing = MANIFEST_KEYS - set(body['manifest'])
        if missing:
            problems.append(f"manifest lacks {sorted(missing)}")
    return problems


def write_json(path, payload, manifest=None, kind=None):
    """Write payload (with the manifest under 'manifest') atomically

    Args:
        kind: report kind checked against REPORT_SCHEMAS before writing

    Returns:
        tuple: (success, message)
    """
    try:
        body = dict(payload) if isinstance(payload, dict) else {'result': payload}
        if manifest is not None:
            body['manifest'] = manifest.to_dict()
        if kind is not None:
            problems = validate_report(kind, body)
            if problems:
                logger.error(f"Invalid {kind} report {path}: {'; '.join(problems)}")
                return False, f"Invalid report: {'; '.join(problems)}"
            body['schema'] = f'{kind}/{VERSION}'
        _atomic_write(path, dumps(body) + '\n')
        if manifest is not None:
            manifest.add_output(path)
        logger.info(f"Wrote {path}")
        return True, f"Report written to {path}"
    except (OSError, TypeError, ValueError) as e:
        logger.error(f"Error writing JSON report {path}: {e}")
        return False, f"Could not write {path}: {e}"


def _csv_text(header, rows):
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
    return buffer.getvalue()


def write_csv(path, header, rows, manifest=None):
    """Write rows atomically with full float precision

    Returns:
        tuple: (success, message)
    """
    try:
        rows = list(rows)
        _atomic_write(path, _csv_text(header, rows))
        if manifest is not None:
            manifest.add_output(path)
        logger.info(f"Wrote {path} ({len(rows)} rows)")
        return True, f"CSV written to {path}"
    except (OSError, TypeError, ValueError) as e:
        logger.error(f"Error writing CSV {path}: {e}")
        return False, f"Could not write {path}: {e}"
