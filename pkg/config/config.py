import os
import logging
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

logger = logging.getLogger(__name__)


def _env_float(name, default):
    value = os.getenv(name)
    if value is None or value.strip() == '':
        return default
    try:
        return float(value)
    except ValueError:
        logger.error(f"{name} must be a number, got {value!r}")
        raise ValueError(f"{name} must be a number")


def _env_int(name, default):
    value = os.getenv(name)
    if value is None or value.strip() == '':
        return default
    try:
        return int(value)
    except ValueError:
        logger.error(f"{name} must be an integer, got {value!r}")
        raise ValueError(f"{name} must be an integer")


# Output locations
OUT_DIR = os.getenv('LAB_OUT_DIR', 'out')
LOG_DIR = os.getenv('LAB_LOG_DIR', 'logs')

# Solver defaults
DEFAULT_TOL = _env_float('LAB_TOL', 1e-10)
DEFAULT_MAX_ITERS = _env_int('LAB_MAX_ITERS', 200)

# Radii ladders: r_k = 2^-k for order estimation, r_k = 10^-k for rate fits
LADDER_K_MIN = _env_int('LAB_LADDER_K_MIN', 8)
LADDER_K_MAX = _env_int('LAB_LADDER_K_MAX', 26)
RATE_LADDER_DECADES = _env_int('LAB_RATE_DECADES', 60)

# Quadrature
QUAD_TOL = _env_float('LAB_QUAD_TOL', 1e-7)
QUAD_NODE_CAP = _env_int('LAB_QUAD_NODE_CAP', 4_000_000)

# Oracles
RESIDUAL_SAMPLES = _env_int('LAB_RESIDUAL_SAMPLES', 100)
SEED = _env_int('LAB_SEED', 20240101)

# Report persistence
MAX_RETRIES = 3
RETRY_DELAY = 0.1  # seconds
