"""Recovery error as a function of the number of items."""

from __future__ import annotations

import logging
import math
from typing import Sequence

import numpy as np
from pydantic import BaseModel, model_validator

from ..config import WORKER_THREADS
from ..errors import DomainError, EmptyRecoveryGridError
from ..irf import TailFlatnessWitness, check_condition4
from ..manifest import ModelSpec, RestScoreTable
from ..recovery import recover_all_items, shared_rest_score_tables, sup_diff
from ..recovery.oracle import ROOT_BRACKET
from .presets import FamilySampler

logger = logging.getLogger(__name__)


class ConvergenceReport(BaseModel):
    """
    Max-over-items sup error on (alpha, beta) per n, with a fitted log-log slope.

    With epsilon set, each n also carries the tail interval (l, u) spanned by the
    items' flatness witnesses, the recovery error on it, and the whole-interval
    bound max(2 epsilon, tail error). Entries are None where the tail interval
    held no recovery knot.
    """

    n_grid: list[int]
    errors: list[float]
    slope: float | None
    alpha: float
    beta: float
    skipped: list[int] = []
    epsilon: float | None = None
    tail_intervals: list[tuple[float, float]] = []
    tail_errors: list[float | None] = []
    full_bounds: list[float | None] = []

    @model_validator(mode="after")
    def _check_lengths(self) -> "ConvergenceReport":
        if len(self.n_grid) != len(self.errors):
            raise ValueError("n_grid and errors must have equal length")
        if any(error < 0.0 for error in self.errors):
            raise ValueError("errors are non-negative")
        tail_lengths = {len(self.tail_intervals), len(self.tail_errors), len(self.full_bounds)}
        expected = len(self.n_grid) if self.epsilon is not None else 0
        if tail_lengths != {expected}:
            raise ValueError("tail intervals, tail errors and full bounds need one entry per n with epsilon set")
        return self

    @property
    def decreasing(self) -> bool:
        return len(self.errors) >= 2 and self.errors[-1] < self.errors[0]


def log_log_slope(n_grid: Sequence[int], errors: Sequence[float]) -> float | None:
    """Least-squares slope of log(error) on log(n); None without two positive errors."""
    pairs = [(n, error) for n, error in zip(n_grid, errors) if error > 0.0]
    if len(pairs) < 2:
        return None
    log_n = np.log([n for n, _ in pairs])
    log_error = np.log([error for _, error in pairs])
    slope = float(np.polyfit(log_n, log_error, 1)[0])
    return slope if math.isfinite(slope) else None


def tail_interval(model: ModelSpec, epsilon: float) -> tuple[float, float]:
    """
    (min l_eps, max u_eps) over the items' tail flatness witnesses.

    Below l and above u every item sits within epsilon of its asymptote, and
    the whole-interval bound charges each of those tails 2 epsilon.
    """
    witnesses: dict[object, TailFlatnessWitness] = {}
    for index, irf in enumerate(model.items):
        key = irf.params if irf.params is not None else id(irf)
        if key in witnesses:
            continue
        witness = check_condition4(irf, epsilon)
        if not witness.passed:
            raise DomainError(
                f"item {index + 1} is not within {epsilon} of its asymptotes below "
                f"{witness.l_eps} and above {witness.u_eps}"
            )
        witnesses[key] = witness
    lower = min(witness.l_eps for witness in witnesses.values())
    upper = max(witness.u_eps for witness in witnesses.values())
    if not lower < upper:
        raise DomainError(f"epsilon {epsilon} leaves no interior interval: l={lower}, u={upper}")
    if lower < ROOT_BRACKET[0] or upper > ROOT_BRACKET[1]:
        raise DomainError(f"tail interval ({lower}, {upper}) reaches past the knot bracket {ROOT_BRACKET}")
    return lower, upper


def convergence_experiment(
    family_sampler: FamilySampler,
    n_grid: Sequence[int],
    alpha: float,
    beta: float,
    reference_sampler: FamilySampler | None = None,
    workers: int = WORKER_THREADS,
    epsilon: float | None = None,
) -> ConvergenceReport:
    """
    Oracle-recover every item for each n and measure max_i sup |P_hat_i - P_i|.

    With `reference_sampler`, the error is instead measured between the two
    recoveries, which is zero whenever both samplers share manifest tables.
    With `epsilon`, each n also gets the whole-interval bound from the tail
    witnesses. Sizes whose (alpha, beta) grid is empty are logged and skipped.
    """
    if not n_grid:
        raise DomainError("n_grid must not be empty")
    kept_n: list[int] = []
    errors: list[float] = []
    skipped: list[int] = []
    tail_intervals: list[tuple[float, float]] = []
    tail_errors: list[float | None] = []
    full_bounds: list[float | None] = []
    for n in n_grid:
        model = family_sampler(n)
        reference = None if reference_sampler is None else reference_sampler(n)
        tables = shared_rest_score_tables(model) if epsilon is not None else None
        try:
            error = _recovery_error(model, reference, (alpha, beta), workers, tables)
        except EmptyRecoveryGridError as empty:
            logger.warning("Skipping n=%d: %s", n, empty)
            skipped.append(n)
            continue
        logger.info("n=%d max recovery error %.6g", n, error)
        kept_n.append(n)
        errors.append(error)
        if epsilon is None:
            continue

        interval = tail_interval(model, epsilon)
        try:
            tail_error: float | None = _recovery_error(model, reference, interval, workers, tables)
        except EmptyRecoveryGridError as empty:
            logger.warning("No tail bound at n=%d: %s", n, empty)
            tail_error = None
        tail_intervals.append(interval)
        tail_errors.append(tail_error)
        full_bounds.append(None if tail_error is None else max(2.0 * epsilon, tail_error))
        logger.info("n=%d tail interval (%.6g, %.6g) error %s", n, interval[0], interval[1], tail_error)

    return ConvergenceReport(
        n_grid=kept_n,
        errors=errors,
        slope=log_log_slope(kept_n, errors),
        alpha=alpha,
        beta=beta,
        skipped=skipped,
        epsilon=epsilon,
        tail_intervals=tail_intervals,
        tail_errors=tail_errors,
        full_bounds=full_bounds,
    )


def _recovery_error(
    model: ModelSpec,
    reference: ModelSpec | None,
    interval: tuple[float, float],
    workers: int,
    tables: Sequence[RestScoreTable] | None,
) -> float:
    lower, upper = interval
    grids = recover_all_items(model, lower, upper, workers, tables)
    if reference is None:
        return sup_diff(grids, model, interval).max_over_items
    reference_grids = recover_all_items(reference, lower, upper, workers)
    return sup_diff(grids, reference_grids, interval).max_over_items
