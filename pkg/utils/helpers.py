import logging

from errors import ParameterError

logger = logging.getLogger(__name__)


def parse_complex(text):
    """Parse a point given as 're,im' or as a Python complex literal

    Args:
        text: e.g. '0.3678794,0' or '0.1+0.2j'

    Returns:
        complex
    """
    text = text.strip()
    try:
        if ',' in text:
            re_part, im_part = text.split(',', 1)
            return complex(float(re_part), float(im_part))
        return complex(text.replace(' ', ''))
    except ValueError:
        logger.error(f"Could not parse point {text!r}")
        raise ParameterError(f"bad point {text!r}, expected 're,im'")


def parse_kappa(text):
    """'const:V' becomes ('const', V); anything else is a catalog id"""
    if text.startswith('const:'):
        try:
            return 'const', float(text.split(':', 1)[1])
        except ValueError:
            raise ParameterError(f"bad constant curvature {text!r}")
    return 'catalog', text


def format_value(value):
    """Full-precision text for floats and complex values"""
    if isinstance(value, complex):
        return f"{value.real!r}{value.imag:+.17g}j"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def format_record(record):
    """Aligned 'key: value' lines for a flat record

    Args:
        record: dict of plain values

    Returns:
        str: Formatted record
    """
    width = max((len(str(k)) for k in record), default=0)
    return '\n'.join(f"  {str(k):<{width}} : {format_value(v)}" for k, v in record.items())


def format_verdicts(verdicts, messages):
    """One line per claim; dict verdicts show their 'verdict' field"""
    lines = []
    for name, verdict in verdicts.items():
        text = verdict.get('verdict') if isinstance(verdict, dict) else verdict
        lines.append(messages.get('verdict_line', name=name, verdict=text))
    return '\n'.join(lines)
