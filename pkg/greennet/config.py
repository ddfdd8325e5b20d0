import logging
import os

# Fallback to .env for local runs
try:
    from dotenv import load_dotenv
    load_dotenv()
except ImportError:
    pass

logger = logging.getLogger(__name__)


def _float_env(name: str, default: float) -> float:
    """Read a float override from the environment, keeping the default on bad input"""
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return default
    try:
        return float(raw)
    except ValueError:
        logger.warning(f"Ignoring malformed {name}={raw!r}, using {default}")
        return default


# Application configuration (hardcoded non-numerical settings)
PROJECT_NAME = "GreenNet"
PROJECT_VERSION = "1.0.0"

# Environment-based settings
ENVIRONMENT = os.getenv("ENVIRONMENT", "production")
LOG_LEVEL = os.getenv("GREENNET_LOG_LEVEL", "DEBUG" if ENVIRONMENT == "development" else "INFO")

# Tolerances
EQ_TOL = 1e-12          # algebraic identities
SOLVE_TOL = _float_env("GREENNET_TOL", 1e-9)  # anything that passed through a solve or pinv
ORTH_TOL = 1e-10        # |<sigma, omega>| below this counts as orthogonal
BORDERLINE_FACTOR = 100.0
SYM_TOL = 1e-10
PINV_RCOND = 1e-10      # relative eigenvalue cutoff of the oracle
SCALAR_ZERO = 1e-14     # scalar pseudo-inverse threshold
COND_MAX = 1e12
SPECTRAL_GAP_TOL = 1e-12
VERIFY_TOL = 1e-8       # add-vertex --verify deviation limit
