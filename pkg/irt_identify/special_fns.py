"""Normal and logistic special functions used by every IRF formula.

All functions accept a scalar or a numpy array and return the same shape
(python float for scalar input). Non-finite inputs and out-of-domain
probabilities raise DomainError instead of being clamped.
"""

import math
from typing import Union

import numpy as np
from scipy import special

from .errors import DomainError

ArrayLike = Union[float, np.ndarray]

_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


def _finite_array(x: ArrayLike, name: str) -> np.ndarray:
    values = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(values)):
        raise DomainError(f"{name} requires finite input, got {x!r}")
    return values


def _restore_shape(values: np.ndarray, original: ArrayLike) -> ArrayLike:
    if np.ndim(original) == 0:
        return float(values)
    return values


def normal_cdf(x: ArrayLike) -> ArrayLike:
    """Standard normal CDF; erfc branch keeps tails free of cancellation."""
    values = _finite_array(x, "normal_cdf")
    return _restore_shape(special.ndtr(values), x)


def normal_sf(x: ArrayLike) -> ArrayLike:
    """Standard normal survival function 1 - Phi(x), accurate for large x."""
    values = _finite_array(x, "normal_sf")
    return _restore_shape(special.ndtr(-values), x)


def normal_pdf(x: ArrayLike) -> ArrayLike:
    """Standard normal density."""
    values = _finite_array(x, "normal_pdf")
    return _restore_shape(_INV_SQRT_2PI * np.exp(-0.5 * values * values), x)


def normal_quantile(u: ArrayLike) -> ArrayLike:
    """Inverse standard normal CDF on the open interval (0, 1)."""
    values = np.asarray(u, dtype=float)
    if not np.all((values > 0.0) & (values < 1.0)):
        raise DomainError(f"normal_quantile requires 0 < u < 1, got {u!r}")
    return _restore_shape(special.ndtri(values), u)


def logistic(x: ArrayLike) -> ArrayLike:
    """Logistic function g(x) = e^x / (1 + e^x), overflow-free."""
    values = _finite_array(x, "logistic")
    return _restore_shape(special.expit(values), x)


def logistic_deriv(x: ArrayLike) -> ArrayLike:
    """
    Derivative g'(x) = 1 / (e^x + e^-x + 2).

    Evaluated as e^-|x| / (1 + e^-|x|)^2, which equals the closed form without
    overflowing for large |x|.
    """
    values = _finite_array(x, "logistic_deriv")
    decay = np.exp(-np.abs(values))
    return _restore_shape(decay / (1.0 + decay) ** 2, x)


def logistic_quantile(u: ArrayLike) -> ArrayLike:
    """Inverse logistic g^-1(u) = log(u / (1 - u)) on (0, 1)."""
    values = np.asarray(u, dtype=float)
    if not np.all((values > 0.0) & (values < 1.0)):
        raise DomainError(f"logistic_quantile requires 0 < u < 1, got {u!r}")
    return _restore_shape(special.logit(values), u)
