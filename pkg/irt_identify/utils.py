"""Shared normalization and formatting helpers for laboratory modules."""

import hashlib
import json
import math
from datetime import datetime, timezone
from typing import Any, Iterable, Sequence

import numpy as np


def coerce_int(value: Any, default: int = 0) -> int:
    """Best-effort integer conversion."""
    try:
        return int(value)
    except (TypeError, ValueError):
        return default


def parse_count_list(raw_value: str | Sequence[int] | None) -> list[int]:
    """Parse a comma-separated list of positive counts, keeping first occurrences."""
    if raw_value is None:
        return []
    if isinstance(raw_value, str):
        tokens: Iterable[Any] = raw_value.replace(";", ",").split(",")
    else:
        tokens = raw_value

    parsed_counts: list[int] = []
    seen_counts: set[int] = set()
    for token in tokens:
        if isinstance(token, str) and not token.strip():
            continue
        count = coerce_int(token.strip() if isinstance(token, str) else token, -1)
        if count <= 0:
            raise ValueError(f"Invalid count {token!r}; expected a positive integer.")
        if count not in seen_counts:
            parsed_counts.append(count)
            seen_counts.add(count)
    return parsed_counts


def format_float(value: float) -> str:
    """Render a float with 17 significant digits for CSV output."""
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return f"{value:.17g}"


def compensated_sum(values: Iterable[float]) -> float:
    """Exactly rounded sum used for scalar integration accumulators."""
    return math.fsum(values)


def compensated_column_sums(weights: np.ndarray, matrix: np.ndarray) -> np.ndarray:
    """
    Return weights @ matrix with each column accumulated by fsum.

    Summation order is fixed per column, so results do not depend on BLAS threading.
    """
    weighted = matrix * weights[:, None]
    return np.array([math.fsum(column) for column in weighted.T], dtype=float)


def config_digest(payload: Any) -> str:
    """Stable sha256 digest of a JSON-compatible configuration payload."""
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def now_utc() -> datetime:
    """Return current UTC time (wrapper to simplify deterministic tests)."""
    return datetime.now(timezone.utc)
