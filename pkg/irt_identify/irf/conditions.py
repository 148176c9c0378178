"""Grid certificates for the derivative and tail-flatness conditions."""

from __future__ import annotations

import logging
import math
from enum import Enum
from typing import Sequence

import numpy as np
from pydantic import BaseModel, Field, model_validator
from scipy.optimize import brentq

from ..config import CONDITION_GRID_SIZE, THETA_FLOOR
from ..errors import DomainError, EvaluationError
from ..special_fns import logistic_quantile, normal_cdf, normal_quantile
from .families import Irf, IrtFamily, ItemParams, make_irf, normalize_params

logger = logging.getLogger(__name__)

LOWER_TREND_THETAS = (1e-4, 1e-6, 1e-8)
UPPER_TREND_THETAS = (1.0 - 1e-4, 1.0 - 1e-6, 1.0 - 1e-8)
# Linear spacing of the tail grids used to verify witnesses
TAIL_GRID_RESOLUTION = 1e-3
# Geometric tail grids reach this factor below the witness
TAIL_GRID_DEPTH = 1e-3
LOWER_GRID_SMALLEST = float(np.finfo(float).tiny)
# 1 - x must stay below 1 on the upper tail
UPPER_GRID_SMALLEST = float(np.finfo(float).eps)
# Witness inequalities are tight for a=1, b=0; allow for rounding in Phi(Phi^-1(eps))
WITNESS_SLACK = 1e-12


class LimitKind(str, Enum):
    ZERO = "zero"
    FINITE = "finite"
    INFINITE = "infinite"


class EndpointLimit(BaseModel):
    kind: LimitKind
    value: float | None = None

    def describe(self) -> str:
        if self.kind is LimitKind.ZERO:
            return "0"
        if self.kind is LimitKind.INFINITE:
            return "+inf"
        return f"{self.value:g}"


class DerivativeLimits(BaseModel):
    """Analytic (p-, p+) classification with numerical corroboration."""

    params: ItemParams
    lower: EndpointLimit
    upper: EndpointLimit
    lower_samples: list[float]
    upper_samples: list[float]
    trend_agrees: bool


class DerivativeBounds(BaseModel):
    alpha: float
    beta: float
    m: float
    M: float
    grid_size: int
    passed: bool

    @model_validator(mode="after")
    def _check_interval(self) -> "DerivativeBounds":
        if not (0.0 < self.alpha < self.beta < 1.0):
            raise ValueError("derivative-bound interval must satisfy 0 < alpha < beta < 1")
        return self


class TailFlatnessWitness(BaseModel):
    epsilon: float = Field(gt=0.0)
    l_eps: float = Field(gt=0.0, lt=1.0)
    u_eps: float = Field(gt=0.0, lt=1.0)
    sup_low: float
    sup_high: float
    kappa: float
    gamma: float
    constructed: str
    passed: bool


class ConditionConstants(BaseModel):
    C_a: float
    C_b: float
    C_cd: float


def _finite_limit(value: float) -> EndpointLimit:
    return EndpointLimit(kind=LimitKind.FINITE, value=value)


_ZERO = EndpointLimit(kind=LimitKind.ZERO)
_INFINITE = EndpointLimit(kind=LimitKind.INFINITE)


def _classify(params: ItemParams) -> tuple[EndpointLimit, EndpointLimit]:
    a, b = params.a, params.b
    if a == 0.0:
        return _ZERO, _ZERO
    if params.family is IrtFamily.LOGISTIC_4PL:
        return _INFINITE, _INFINITE
    a_squared = a * a
    if a_squared < 1.0:
        return _INFINITE, _INFINITE
    if a_squared > 1.0:
        return _ZERO, _ZERO
    if b > 0.0:
        return _ZERO, _INFINITE
    if b < 0.0:
        return _INFINITE, _ZERO
    return _finite_limit(a), _finite_limit(a)


def _trend_agrees(limit: EndpointLimit, samples: Sequence[float]) -> bool:
    """Samples are ordered toward the endpoint; check they head to the limit."""
    pairs = list(zip(samples, samples[1:]))
    if limit.kind is LimitKind.ZERO:
        return all(later < earlier for earlier, later in pairs)
    if limit.kind is LimitKind.INFINITE:
        return all(later > earlier for earlier, later in pairs)
    gaps = [abs(sample - limit.value) for sample in samples]
    return all(later <= earlier + 1e-12 for earlier, later in zip(gaps, gaps[1:]))


def derivative_limits(params: ItemParams) -> DerivativeLimits:
    """
    Classify lim P'(theta) at theta -> 0 and theta -> 1.

    Normal ogive follows the a^2 / sign(b) case table; 4PL diverges at both ends
    whenever a != 0. Items with a < 0 are classified after reflection.
    """
    normalized, _ = normalize_params(params)
    lower, upper = _classify(normalized)

    if normalized.a == 0.0:
        lower_samples = [0.0] * len(LOWER_TREND_THETAS)
        upper_samples = [0.0] * len(UPPER_TREND_THETAS)
        agrees = True
    else:
        irf = make_irf(normalized)
        lower_samples = [float(v) for v in irf.deriv(np.array(LOWER_TREND_THETAS))]
        upper_samples = [float(v) for v in irf.deriv(np.array(UPPER_TREND_THETAS))]
        agrees = _trend_agrees(lower, lower_samples) and _trend_agrees(upper, upper_samples)

    if not agrees:
        logger.warning(
            "Derivative trend disagrees with classification for %s: lower=%s upper=%s",
            normalized,
            lower_samples,
            upper_samples,
        )

    return DerivativeLimits(
        params=normalized,
        lower=lower,
        upper=upper,
        lower_samples=lower_samples,
        upper_samples=upper_samples,
        trend_agrees=agrees,
    )


def check_condition3(
    irf: Irf,
    alpha: float,
    beta: float,
    grid_size: int = CONDITION_GRID_SIZE,
) -> DerivativeBounds:
    """Min/max of P' over a uniform grid on [alpha, beta]."""
    if not (0.0 < alpha < beta < 1.0):
        raise DomainError(f"derivative bounds require 0 < alpha < beta < 1, got ({alpha}, {beta})")
    if grid_size < 3:
        raise DomainError(f"grid_size must be at least 3, got {grid_size}")

    grid = np.linspace(alpha, beta, grid_size)
    with np.errstate(all="ignore"):
        derivs = np.asarray(irf.deriv(grid), dtype=float)
    bad = np.flatnonzero(~np.isfinite(derivs))
    if bad.size:
        raise EvaluationError("derivative evaluation produced a non-finite value", float(grid[bad[0]]))

    m = float(derivs.min())
    M = float(derivs.max())
    return DerivativeBounds(
        alpha=alpha,
        beta=beta,
        m=m,
        M=M,
        grid_size=grid_size,
        passed=m > 0.0 and math.isfinite(M),
    )


def condition_constants(params: ItemParams) -> ConditionConstants:
    """
    Tightest per-item constants with 1/C_a <= a <= C_a, |b| <= C_b and d - c <= C_cd.

    C_a bounds the slope from both sides because the witness scales the
    anchor by a or 1/a depending on its sign.
    """
    normalized, _ = normalize_params(params)
    a = normalized.a
    if a <= 0.0:
        raise DomainError("tail-flatness constants need a != 0")
    return ConditionConstants(
        C_a=max(a, 1.0 / a),
        C_b=abs(normalized.b),
        C_cd=normalized.d - normalized.c,
    )


def _closed_form_lower_witness(params: ItemParams, epsilon: float) -> float:
    constants = condition_constants(params)
    if params.family is IrtFamily.NORMAL_OGIVE:
        anchor = normal_quantile(epsilon)
    else:
        anchor = logistic_quantile(epsilon / constants.C_cd)
    scale = constants.C_a if anchor < 0.0 else 1.0 / constants.C_a
    return float(normal_cdf(scale * anchor - constants.C_b))


def _numerical_lower_witness(irf: Irf, epsilon: float) -> float:
    """Largest theta with P(theta) - kappa <= epsilon, by bracketing on the monotone IRF."""
    low, high = THETA_FLOOR, 1.0 - THETA_FLOOR
    if irf.eval(low) - irf.kappa > epsilon:
        raise DomainError("IRF exceeds kappa + epsilon even at the lower integration floor")
    if irf.eval(high) - irf.kappa <= epsilon:
        return high
    root = brentq(lambda t: irf.eval(t) - irf.kappa - epsilon, low, high, xtol=1e-14)
    return float(root) * (1.0 - 1e-9)


def _numerical_upper_witness(irf: Irf, epsilon: float) -> float:
    low, high = THETA_FLOOR, 1.0 - THETA_FLOOR
    if irf.gamma - irf.eval(high) > epsilon:
        raise DomainError("IRF stays below gamma - epsilon even at the upper integration floor")
    if irf.gamma - irf.eval(low) <= epsilon:
        return low
    root = brentq(lambda t: irf.gamma - irf.eval(t) - epsilon, low, high, xtol=1e-14)
    return 1.0 - (1.0 - float(root)) * (1.0 - 1e-9)


def _tail_grid(edge: float, grid_size: int, smallest: float) -> np.ndarray:
    """
    Geometric plus linear points on [start, edge], measured from an endpoint.

    The geometric part starts below both the integration floor and the edge,
    so witnesses deep in the tail are still checked on many decades.
    """
    start = min(max(min(THETA_FLOOR, edge * TAIL_GRID_DEPTH), smallest), edge)
    linear_points = max(grid_size, int(math.ceil((edge - start) / TAIL_GRID_RESOLUTION)) + 1)
    linear = np.linspace(start, edge, linear_points)
    geometric = np.geomspace(start, edge, grid_size)
    return np.unique(np.concatenate([linear, geometric]))


def check_condition4(
    irf: Irf,
    epsilon: float,
    grid_size: int = CONDITION_GRID_SIZE,
) -> TailFlatnessWitness:
    """
    Construct (l_eps, u_eps) and verify both tail suprema on grids.

    Parametric items use the closed-form witnesses; u_eps mirrors l_eps because
    gamma - P has the same form with the sign of b flipped and C_b covers |b|.
    Other IRFs get witnesses by bracketing the monotone IRF.
    """
    kappa, gamma = irf.kappa, irf.gamma
    if not (0.0 < epsilon < gamma - kappa):
        raise DomainError(f"epsilon must lie in (0, {gamma - kappa}), got {epsilon}")

    if irf.params is not None:
        l_eps = _closed_form_lower_witness(irf.params, epsilon)
        u_eps = 1.0 - l_eps
        constructed = "closed-form"
    else:
        l_eps = _numerical_lower_witness(irf, epsilon)
        u_eps = _numerical_upper_witness(irf, epsilon)
        constructed = "bracketing"

    if not (0.0 < l_eps < 1.0 and 0.0 < u_eps < 1.0):
        raise DomainError(f"witness is not representable in double precision: l={l_eps}, u={u_eps}")

    low_grid = _tail_grid(l_eps, grid_size, LOWER_GRID_SMALLEST)
    high_grid = 1.0 - _tail_grid(1.0 - u_eps, grid_size, UPPER_GRID_SMALLEST)
    sup_low = float(np.max(np.asarray(irf.eval(low_grid)) - kappa))
    sup_high = float(np.max(gamma - np.asarray(irf.eval(high_grid))))

    logger.debug("tail witness eps=%g l=%g u=%g sups=(%g, %g)", epsilon, l_eps, u_eps, sup_low, sup_high)
    return TailFlatnessWitness(
        epsilon=epsilon,
        l_eps=l_eps,
        u_eps=u_eps,
        sup_low=sup_low,
        sup_high=sup_high,
        kappa=kappa,
        gamma=gamma,
        constructed=constructed,
        passed=sup_low <= epsilon + WITNESS_SLACK and sup_high <= epsilon + WITNESS_SLACK,
    )


class ItemConditionReport(BaseModel):
    index: int
    params: ItemParams | None
    condition3: DerivativeBounds
    condition4: TailFlatnessWitness
    limits: DerivativeLimits | None
    passed: bool


class SequenceConditionReport(BaseModel):
    """Per-item certificates plus the uniform (min m, max M) summary across items."""

    alpha: float
    beta: float
    epsilon: float
    m_min: float
    M_max: float
    items: list[ItemConditionReport]
    passed: bool


def sequence_condition_report(
    irfs: Sequence[Irf],
    alpha: float,
    beta: float,
    epsilon: float,
    grid_size: int = CONDITION_GRID_SIZE,
) -> SequenceConditionReport:
    """Aggregate derivative bounds, tail witnesses and derivative limits for a sequence of items."""
    if not irfs:
        raise DomainError("at least one item is required")

    item_reports: list[ItemConditionReport] = []
    for index, irf in enumerate(irfs):
        bounds = check_condition3(irf, alpha, beta, grid_size)
        witness = check_condition4(irf, epsilon, grid_size)
        limits = derivative_limits(irf.params) if irf.params is not None else None
        item_passed = bounds.passed and witness.passed and (limits is None or limits.trend_agrees)
        if not item_passed:
            logger.warning("Item %d failed condition checks", index)
        item_reports.append(
            ItemConditionReport(
                index=index,
                params=irf.params,
                condition3=bounds,
                condition4=witness,
                limits=limits,
                passed=item_passed,
            )
        )

    return SequenceConditionReport(
        alpha=alpha,
        beta=beta,
        epsilon=epsilon,
        m_min=min(report.condition3.m for report in item_reports),
        M_max=max(report.condition3.M for report in item_reports),
        items=item_reports,
        passed=all(report.passed for report in item_reports),
    )
