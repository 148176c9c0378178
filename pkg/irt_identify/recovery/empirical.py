"""Finite-sample regressogram: proportion correct per rest-score bin."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike
from pydantic import BaseModel, model_validator

from ..config import MIN_BIN_SIZE
from ..errors import DegenerateDataError, DomainError

logger = logging.getLogger(__name__)

MIN_RESPONDENTS = 100


def validate_responses(responses: ArrayLike) -> np.ndarray:
    """Return an (N, n) int8 matrix or raise DomainError for non-binary input."""
    matrix = np.asarray(responses)
    if matrix.ndim != 2 or matrix.shape[1] < 2:
        raise DomainError(f"responses must be an N x n matrix with n >= 2, got shape {matrix.shape}")
    if not np.all((matrix == 0) | (matrix == 1)):
        raise DomainError("responses must contain only 0 and 1")
    return matrix.astype(np.int8, copy=False)


@dataclass(frozen=True)
class RestScoreGroups:
    """Respondents tallied by rest score (sum of the other items) for one item."""

    item: int
    n_respondents: int
    scores: np.ndarray
    counts: np.ndarray
    successes: np.ndarray


def rest_score_groups(responses: ArrayLike, item: int) -> RestScoreGroups:
    matrix = validate_responses(responses)
    if not 0 <= item < matrix.shape[1]:
        raise DomainError(f"item index {item} outside 0..{matrix.shape[1] - 1}")
    target = matrix[:, item].astype(np.int64)
    rest = matrix.sum(axis=1, dtype=np.int64) - target
    n_rest = matrix.shape[1] - 1

    counts = np.bincount(rest, minlength=n_rest + 1)
    successes = np.bincount(rest, weights=target, minlength=n_rest + 1).astype(np.int64)
    present = np.flatnonzero(counts)
    return RestScoreGroups(
        item=item,
        n_respondents=matrix.shape[0],
        scores=present,
        counts=counts[present],
        successes=successes[present],
    )


class EmpiricalBin(BaseModel):
    rest_low: int
    rest_high: int
    count: int
    theta_hat: float
    p_hat: float


class EmpiricalRecovery(BaseModel):
    """
    Regressogram for one item.

    theta_hat is the midpoint of the bin's rank range divided by N, the empirical
    rest-score quantile under a uniform trait.
    """

    item: int
    n_respondents: int
    bins: list[EmpiricalBin]

    @model_validator(mode="after")
    def _check_bins(self) -> "EmpiricalRecovery":
        thetas = [entry.theta_hat for entry in self.bins]
        if any(later <= earlier for earlier, later in zip(thetas, thetas[1:])):
            raise ValueError("bin trait estimates must be strictly increasing")
        return self

    def thetas(self) -> np.ndarray:
        return np.array([entry.theta_hat for entry in self.bins])

    def p_hats(self) -> np.ndarray:
        return np.array([entry.p_hat for entry in self.bins])

    def evaluate(self, theta: ArrayLike) -> np.ndarray:
        return np.interp(np.asarray(theta, dtype=float), self.thetas(), self.p_hats())


def _merge_groups(groups: RestScoreGroups, threshold: int) -> list[tuple[int, int]]:
    """Index ranges [start, stop) into the groups, each holding >= threshold respondents."""
    ranges: list[tuple[int, int]] = []
    start = 0
    running = 0
    for position, count in enumerate(groups.counts):
        running += int(count)
        if running >= threshold:
            ranges.append((start, position + 1))
            start = position + 1
            running = 0
    if start < len(groups.counts):
        if ranges:
            ranges[-1] = (ranges[-1][0], len(groups.counts))
        else:
            ranges.append((start, len(groups.counts)))
    return ranges


def recover_irf_empirical(
    responses: ArrayLike,
    item: int,
    bins: int | None = None,
    min_bin_size: int = MIN_BIN_SIZE,
) -> EmpiricalRecovery:
    """
    Group respondents by rest score and report the proportion correct per group.

    Adjacent rest scores are merged until each bin holds at least `min_bin_size`
    respondents; `bins` additionally caps the number of bins at roughly N/bins
    respondents each.

    Raises:
        DegenerateDataError: the item column is constant.
    """
    matrix = validate_responses(responses)
    n_respondents = matrix.shape[0]
    if n_respondents < MIN_RESPONDENTS:
        raise DomainError(f"empirical recovery needs at least {MIN_RESPONDENTS} respondents, got {n_respondents}")
    if bins is not None and bins < 1:
        raise DomainError(f"bins must be positive, got {bins}")

    column_total = int(matrix[:, item].sum()) if 0 <= item < matrix.shape[1] else -1
    if column_total in (0, n_respondents):
        raise DegenerateDataError(f"item {item} has a constant response column")

    groups = rest_score_groups(matrix, item)
    threshold = max(1, min_bin_size)
    if bins is not None:
        threshold = max(threshold, math.ceil(n_respondents / bins))

    recovered: list[EmpiricalBin] = []
    rank_start = 0
    for start, stop in _merge_groups(groups, threshold):
        count = int(groups.counts[start:stop].sum())
        successes = int(groups.successes[start:stop].sum())
        recovered.append(
            EmpiricalBin(
                rest_low=int(groups.scores[start]),
                rest_high=int(groups.scores[stop - 1]),
                count=count,
                theta_hat=(rank_start + 0.5 * count) / n_respondents,
                p_hat=successes / count,
            )
        )
        rank_start += count
    return EmpiricalRecovery(item=item, n_respondents=n_respondents, bins=recovered)


def recover_all_empirical(
    responses: ArrayLike,
    bins: int | None = None,
    min_bin_size: int = MIN_BIN_SIZE,
) -> dict[int, EmpiricalRecovery]:
    """Regressograms for every item; constant columns are logged and skipped."""
    matrix = validate_responses(responses)
    recoveries: dict[int, EmpiricalRecovery] = {}
    for item in range(matrix.shape[1]):
        try:
            recoveries[item] = recover_irf_empirical(matrix, item, bins, min_bin_size)
        except DegenerateDataError as error:
            logger.warning("Skipping item %d: %s", item, error)
    return recoveries
