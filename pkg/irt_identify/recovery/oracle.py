"""Mean-IRF inversion and oracle recovery of one item from rest-score tables."""

from __future__ import annotations

import logging
import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Hashable, Sequence

import numpy as np
from numpy.typing import ArrayLike
from pydantic import BaseModel, model_validator

from ..config import WORKER_THREADS
from ..errors import DomainError, EmptyRecoveryGridError, NoSolutionError
from ..irf import Irf, ItemBank
from ..manifest import ModelSpec, RestScoreTable, rest_score_table, rest_score_tables

logger = logging.getLogger(__name__)

ROOT_BRACKET = (1e-10, 1.0 - 1e-10)
ROOT_TOLERANCE = 1e-12
MAX_ROOT_ITERATIONS = 200
# Tabulation points that seed a bracket for every target before Newton polishing
_TAIL_DECADES = np.geomspace(ROOT_BRACKET[0], 0.01, 41)
BRACKET_GRID = np.unique(np.concatenate([_TAIL_DECADES, np.linspace(0.01, 0.99, 197), 1.0 - _TAIL_DECADES]))


@dataclass(frozen=True)
class RestMean:
    """
    Mean IRF of the rest items, with repeated Irf objects evaluated once.

    Parametric rest items are stacked into an ItemBank and evaluated as one
    array operation; other IRFs are summed one object at a time.
    """

    irfs: tuple[Irf, ...]
    counts: tuple[int, ...]
    n_rest: int
    bank: ItemBank | None = field(default=None, compare=False, repr=False)

    @classmethod
    def for_item(cls, model: ModelSpec, excluded_item: int) -> "RestMean":
        rest = model.require_rest_items(excluded_item)
        tally = Counter(id(model.items[index]) for index in rest)
        unique: dict[int, Irf] = {}
        for index in rest:
            unique.setdefault(id(model.items[index]), model.items[index])
        irfs = tuple(unique.values())
        counts = tuple(tally[key] for key in unique)
        return cls(irfs=irfs, counts=counts, n_rest=len(rest), bank=ItemBank.from_irfs(irfs, counts))

    @property
    def lower_limit(self) -> float:
        return math.fsum(count * irf.kappa for irf, count in zip(self.irfs, self.counts)) / self.n_rest

    @property
    def upper_limit(self) -> float:
        return math.fsum(count * irf.gamma for irf, count in zip(self.irfs, self.counts)) / self.n_rest

    def value(self, theta: ArrayLike) -> ArrayLike:
        if self.bank is not None:
            total = self.bank.weighted_sum(theta).reshape(np.shape(theta))
        else:
            total = sum(count * np.asarray(irf.eval(theta)) for irf, count in zip(self.irfs, self.counts))
        result = total / self.n_rest
        return float(result) if np.ndim(theta) == 0 else result

    def slope(self, theta: ArrayLike) -> ArrayLike:
        if self.bank is not None:
            total = self.bank.weighted_deriv_sum(theta).reshape(np.shape(theta))
        else:
            total = sum(count * np.asarray(irf.deriv(theta)) for irf, count in zip(self.irfs, self.counts))
        result = total / self.n_rest
        return float(result) if np.ndim(theta) == 0 else result

    def invert(self, targets: ArrayLike, tolerance: float = ROOT_TOLERANCE) -> np.ndarray:
        """
        Solve value(theta) = target for every target at once.

        Each target is bracketed from a tabulation on BRACKET_GRID, then all
        targets are polished together by Newton steps that fall back to
        bisection when they leave their bracket.

        Raises:
            NoSolutionError: a target is not strictly between the mean asymptotes,
                or is only reached within 1e-10 of an endpoint.
        """
        goals = np.atleast_1d(np.asarray(targets, dtype=float))
        low_limit, high_limit = self.lower_limit, self.upper_limit
        outside = ~((goals > low_limit) & (goals < high_limit))
        if np.any(outside):
            raise NoSolutionError(
                f"target {float(goals[outside][0])!r} outside the attainable range ({low_limit!r}, {high_limit!r})"
            )

        tabulated = np.maximum.accumulate(np.asarray(self.value(BRACKET_GRID)))
        unreachable = (goals < tabulated[0]) | (goals > tabulated[-1])
        if np.any(unreachable):
            raise NoSolutionError(
                f"target {float(goals[unreachable][0])!r} is only reached within {ROOT_BRACKET[0]:g} of an endpoint"
            )

        upper_index = np.clip(np.searchsorted(tabulated, goals, side="left"), 1, BRACKET_GRID.size - 1)
        lower = BRACKET_GRID[upper_index - 1].copy()
        upper = BRACKET_GRID[upper_index].copy()
        rise = tabulated[upper_index] - tabulated[upper_index - 1]
        with np.errstate(divide="ignore", invalid="ignore"):
            fraction = np.where(rise > 0.0, (goals - tabulated[upper_index - 1]) / rise, 0.5)
        theta = lower + np.clip(fraction, 0.0, 1.0) * (upper - lower)

        pending = np.arange(goals.size)
        for _ in range(MAX_ROOT_ITERATIONS):
            current = theta[pending]
            residual = np.asarray(self.value(current)) - goals[pending]
            below = residual < 0.0
            lower[pending] = np.where(below, current, lower[pending])
            upper[pending] = np.where(below, upper[pending], current)
            unresolved = (np.abs(residual) > tolerance) & (upper[pending] - lower[pending] > 1e-15)
            pending, current, residual = pending[unresolved], current[unresolved], residual[unresolved]
            if pending.size == 0:
                break

            slope = np.asarray(self.slope(current))
            with np.errstate(divide="ignore", invalid="ignore"):
                candidate = current - residual / slope
            low, high = lower[pending], upper[pending]
            # Newton leaving the bracket falls back to bisection
            inside = (slope > 0.0) & np.isfinite(candidate) & (candidate > low) & (candidate < high)
            theta[pending] = np.where(inside, candidate, 0.5 * (low + high))
        else:
            logger.warning(
                "mean IRF inversion stopped after %d iterations with %d targets unresolved",
                MAX_ROOT_ITERATIONS,
                pending.size,
            )
        return theta


def mean_irf(model: ModelSpec, excluded_item: int, theta: ArrayLike) -> ArrayLike:
    """Arithmetic mean of every IRF except `excluded_item`, at theta in (0, 1)."""
    return RestMean.for_item(model, excluded_item).value(theta)


def invert_mean_irf(
    model: ModelSpec,
    excluded_item: int,
    target: float,
    tolerance: float = ROOT_TOLERANCE,
) -> float:
    """
    Solve mean_irf(theta) = target on the bracket [1e-10, 1 - 1e-10].

    Raises:
        NoSolutionError: target is not strictly between the mean asymptotes.
    """
    rest_mean = RestMean.for_item(model, excluded_item)
    return float(rest_mean.invert(np.array([float(target)]), tolerance)[0])


class RecoveryEntry(BaseModel):
    k: int
    theta_k: float
    p_hat: float


class RecoveryGrid(BaseModel):
    """Recovered values P_i(theta_k) at the knots theta_k inside (alpha, beta)."""

    item: int
    entries: list[RecoveryEntry]
    alpha: float
    beta: float

    @model_validator(mode="after")
    def _check_knots(self) -> "RecoveryGrid":
        thetas = [entry.theta_k for entry in self.entries]
        if any(later <= earlier for earlier, later in zip(thetas, thetas[1:])):
            raise ValueError("recovery knots must be strictly increasing")
        if any(not self.alpha < theta < self.beta for theta in thetas):
            raise ValueError("recovery knots must lie inside (alpha, beta)")
        return self

    def ks(self) -> np.ndarray:
        return np.array([entry.k for entry in self.entries], dtype=int)

    def thetas(self) -> np.ndarray:
        return np.array([entry.theta_k for entry in self.entries])

    def p_hats(self) -> np.ndarray:
        return np.array([entry.p_hat for entry in self.entries])

    def evaluate(self, theta: ArrayLike) -> np.ndarray:
        """Linear interpolation between knots, constant beyond the outer knots."""
        return np.interp(np.asarray(theta, dtype=float), self.thetas(), self.p_hats())

    def with_item(self, item: int) -> "RecoveryGrid":
        return self.model_copy(update={"item": item})


def _require_interval(alpha: float, beta: float) -> None:
    if not 0.0 < alpha < beta < 1.0:
        raise DomainError(f"interval must satisfy 0 < alpha < beta < 1, got ({alpha}, {beta})")


def _admissible_ks(rest_mean: RestMean, alpha: float, beta: float) -> list[int]:
    """Integers k with mean(alpha) < k/(n-1) < mean(beta), i.e. theta_k in (alpha, beta)."""
    n_rest = rest_mean.n_rest
    low, high = rest_mean.value(alpha), rest_mean.value(beta)
    first = max(0, math.floor(low * n_rest))
    last = min(n_rest, math.ceil(high * n_rest))
    return [k for k in range(first, last + 1) if low < k / n_rest < high]


def recover_irf_oracle(
    model: ModelSpec,
    item: int,
    alpha: float,
    beta: float,
    table: RestScoreTable | None = None,
) -> RecoveryGrid:
    """
    Recover P_item(theta_k) as P(Y_item = 1 | rest score = k/(n-1)).

    Only the rest items' mean IRF and the rest-score table are consulted. A table
    computed for another item with identical parameters may be passed in.

    Raises:
        EmptyRecoveryGridError: no knot theta_k falls strictly inside (alpha, beta).
    """
    _require_interval(alpha, beta)
    rest_mean = RestMean.for_item(model, item)
    candidates = _admissible_ks(rest_mean, alpha, beta)
    if not candidates:
        raise EmptyRecoveryGridError(
            f"recovery grid empty for item {item}: n={model.n} has no knot in ({alpha}, {beta})"
        )

    active_table = table if table is not None else rest_score_table(model, item)
    ks = [k for k in candidates if active_table.defined[k]]
    knots = rest_mean.invert(np.array(ks, dtype=float) / rest_mean.n_rest) if ks else np.empty(0)
    entries = [
        RecoveryEntry(k=k, theta_k=float(theta_k), p_hat=float(active_table.cond_item[k]))
        for k, theta_k in zip(ks, knots)
        if alpha < theta_k < beta
    ]

    if not entries:
        raise EmptyRecoveryGridError(f"recovery grid empty for item {item} on ({alpha}, {beta})")
    logger.debug("item %d recovered at %d knots", item, len(entries))
    return RecoveryGrid(item=item, entries=entries, alpha=alpha, beta=beta)


def _item_key(irf: Irf) -> Hashable:
    if irf.params is not None:
        return ("params", irf.params)
    return ("irf", id(irf))


def _representatives(model: ModelSpec) -> dict[Hashable, int]:
    representatives: dict[Hashable, int] = {}
    for index, irf in enumerate(model.items):
        representatives.setdefault(_item_key(irf), index)
    return representatives


def shared_rest_score_tables(model: ModelSpec) -> list[RestScoreTable] | None:
    """
    All rest-score tables from one leave-one-out recursion, or None when the
    model has at most log2(n) + 1 distinct items and per-item tables are cheaper.
    """
    if len(_representatives(model)) <= math.log2(model.n) + 1:
        return None
    return rest_score_tables(model)


def recover_all_items(
    model: ModelSpec,
    alpha: float,
    beta: float,
    workers: int = WORKER_THREADS,
    tables: Sequence[RestScoreTable] | None = None,
) -> list[RecoveryGrid]:
    """
    Oracle recovery for every item, in item order.

    Items with equal parameters share their rest-item multiset, so each distinct
    parameter vector is recovered once and relabelled. Tables for heterogeneous
    models come from shared_rest_score_tables. Precomputed `tables` (one per
    item, in item order) skip that step.
    """
    _require_interval(alpha, beta)
    representatives = _representatives(model)
    keys = list(representatives)
    shared_tables = tables if tables is not None else shared_rest_score_tables(model)
    if shared_tables is not None and len(shared_tables) != model.n:
        raise DomainError(f"expected {model.n} rest-score tables, got {len(shared_tables)}")

    def recover(index: int) -> RecoveryGrid:
        table = shared_tables[index] if shared_tables is not None else None
        return recover_irf_oracle(model, index, alpha, beta, table)

    with ThreadPoolExecutor(max_workers=max(1, workers)) as executor:
        grids = list(executor.map(recover, [representatives[key] for key in keys]))
    by_key: dict[Hashable, RecoveryGrid] = dict(zip(keys, grids))
    logger.info("recovered %d items from %d distinct rest-score tables", model.n, len(keys))
    return [by_key[_item_key(irf)].with_item(index) for index, irf in enumerate(model.items)]


def recovery_error(grid: RecoveryGrid, irf: Irf) -> float:
    """max_k |p_hat_k - P(theta_k)| at the knots themselves."""
    truth: Any = irf.eval(grid.thetas())
    return float(np.max(np.abs(grid.p_hats() - np.asarray(truth))))
