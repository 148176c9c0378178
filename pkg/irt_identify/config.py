"""Configuration for the identifiability laboratory."""

import os

from dotenv import load_dotenv

load_dotenv()

DEVELOPMENT_ENV_NAMES = {"development", "dev", "local"}
VALID_LOG_LEVELS = {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}


def _strip_wrapping_quotes(raw_value: str) -> str:
    """Trim whitespace and optional matching single/double quotes."""
    normalized_value = raw_value.strip()
    while (
        len(normalized_value) >= 2
        and normalized_value[0] == normalized_value[-1]
        and normalized_value[0] in {"'", '"'}
    ):
        normalized_value = normalized_value[1:-1].strip()
    return normalized_value


def resolve_identify_env(raw_identify_env: str | None, raw_environment: str | None) -> str:
    """Resolve runtime environment from supported env var fallbacks."""
    raw_value = raw_identify_env or raw_environment or "production"
    return _strip_wrapping_quotes(raw_value).lower()


def _parse_int_setting(raw_value: str | None, fallback: int, minimum: int) -> int:
    """Parse an integer setting, falling back when missing or below the minimum."""
    if not raw_value:
        return fallback
    normalized_value = _strip_wrapping_quotes(raw_value)
    try:
        parsed_value = int(normalized_value)
    except ValueError:
        return fallback
    if parsed_value < minimum:
        return fallback
    return parsed_value


def _parse_float_setting(raw_value: str | None, fallback: float) -> float:
    """Parse a strictly positive float setting with fallback."""
    if not raw_value:
        return fallback
    try:
        parsed_value = float(_strip_wrapping_quotes(raw_value))
    except ValueError:
        return fallback
    if not parsed_value > 0.0:
        return fallback
    return parsed_value


def resolve_worker_threads(raw_threads: str | None, cpu_count: int | None) -> int:
    """
    Resolve the worker pool size.

    IRT_IDENTIFY_THREADS caps parallelism; without it the pool uses up to eight
    CPUs. Invalid or non-positive values fall back to a single worker.
    """
    default_threads = max(1, min(8, cpu_count or 1))
    if raw_threads is None or not _strip_wrapping_quotes(raw_threads):
        return default_threads
    return _parse_int_setting(raw_threads, 1, 1)


def resolve_log_level(raw_level: str | None, environment: str) -> str:
    """Resolve log level from env override or environment-aware default."""
    if raw_level:
        normalized_level = _strip_wrapping_quotes(raw_level).upper()
        if normalized_level in VALID_LOG_LEVELS:
            return normalized_level
    if environment in DEVELOPMENT_ENV_NAMES:
        return "DEBUG"
    return "WARNING"


IDENTIFY_ENV = resolve_identify_env(
    os.getenv("IRT_IDENTIFY_ENV"),
    os.getenv("ENVIRONMENT"),
)

LOG_LEVEL = resolve_log_level(os.getenv("IRT_IDENTIFY_LOG_LEVEL"), IDENTIFY_ENV)

# Worker parallelism for per-item and per-n work
WORKER_THREADS = resolve_worker_threads(os.getenv("IRT_IDENTIFY_THREADS"), os.cpu_count())

# Composite Gauss-Legendre rule on (0, 1)
QUADRATURE_PANELS = _parse_int_setting(os.getenv("IRT_IDENTIFY_QUAD_PANELS"), 32, 8)
QUADRATURE_NODES = _parse_int_setting(os.getenv("IRT_IDENTIFY_QUAD_NODES"), 32, 4)
QUADRATURE_TOLERANCE = _parse_float_setting(os.getenv("IRT_IDENTIFY_QUAD_TOLERANCE"), 1e-9)

# Open interval (0, 1) is integrated on [THETA_FLOOR, 1 - THETA_FLOOR]
THETA_FLOOR = 1e-12

# Grid resolution for derivative-bound and tail-witness certificates
CONDITION_GRID_SIZE = _parse_int_setting(os.getenv("IRT_IDENTIFY_CONDITION_GRID"), 1001, 3)

# Regressogram merge threshold (respondents per bin)
MIN_BIN_SIZE = _parse_int_setting(os.getenv("IRT_IDENTIFY_MIN_BIN_SIZE"), 25, 1)

DEFAULT_SEED = _parse_int_setting(os.getenv("IRT_IDENTIFY_SEED"), 20240501, 0)

# full_manifest refuses larger item counts
MAX_ENUMERATION_ITEMS = 20

# Conditionals with P(E_{n,k}) below this are reported undefined
PMF_FLOOR = 1e-300
