"""Exact Poisson-binomial distribution of a sum of independent Bernoulli variables."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from ..errors import DomainError


@dataclass(frozen=True)
class PoissonBinomialMoments:
    """mu = sum p_j and sigma2 = sum p_j (1 - p_j)."""

    mu: float
    sigma2: float


def _validated_probs(probs: Sequence[float] | np.ndarray) -> np.ndarray:
    values = np.asarray(probs, dtype=float)
    if values.ndim != 1 or values.size < 1:
        raise DomainError("poisson-binomial needs a non-empty one-dimensional probability list")
    if not np.all((values >= 0.0) & (values <= 1.0)):
        raise DomainError(f"probabilities must lie in [0, 1], got {values!r}")
    return values


def poisson_binomial_pmf(probs: Sequence[float] | np.ndarray) -> np.ndarray:
    """PMF over 0..len(probs) by the O(n^2) convolution recurrence."""
    values = _validated_probs(probs)
    return poisson_binomial_pmf_nodes(values[:, None])[:, 0]


def poisson_binomial_pmf_nodes(prob_matrix: np.ndarray) -> np.ndarray:
    """
    Per-node PMFs for a (items, nodes) probability matrix.

    Returns an (items + 1, nodes) array whose column t is the PMF of the sum at
    node t. Only the active prefix of the support is updated at each step.
    """
    probs = _validated_matrix(prob_matrix)
    item_count, node_count = probs.shape
    pmf = np.zeros((item_count + 1, node_count))
    pmf[0] = 1.0
    _absorb(pmf, 0, probs)
    return pmf


def _validated_matrix(prob_matrix: np.ndarray) -> np.ndarray:
    probs = np.asarray(prob_matrix, dtype=float)
    if probs.ndim != 2:
        raise DomainError("prob_matrix must be two-dimensional (items, nodes)")
    if not np.all((probs >= 0.0) & (probs <= 1.0)):
        raise DomainError("probabilities must lie in [0, 1]")
    return probs


def _absorb(pmf: np.ndarray, size: int, probs: np.ndarray) -> int:
    """Fold each row of probs into pmf in place; pmf is supported on 0..size on entry."""
    for p in probs:
        q = 1.0 - p
        pmf[1 : size + 2] = pmf[1 : size + 2] * q + pmf[0 : size + 1] * p
        pmf[0] *= q
        size += 1
    return size


def leave_one_out_pmfs_nodes(prob_matrix: np.ndarray) -> Iterator[tuple[int, np.ndarray]]:
    """
    Yield (item, per-node PMF of every other item) for each row of prob_matrix.

    The item range is split in halves and each half is folded into the PMF
    shared by the other half, so all items together cost O(items^2 log items)
    per node rather than O(items^3). Yielded arrays have shape (items, nodes)
    and are never modified after they are yielded.
    """
    probs = _validated_matrix(prob_matrix)
    item_count, node_count = probs.shape
    if item_count < 1:
        raise DomainError("prob_matrix needs at least one item")
    root = np.zeros((item_count, node_count))
    root[0] = 1.0

    def descend(low: int, high: int, pmf: np.ndarray, size: int) -> Iterator[tuple[int, np.ndarray]]:
        if high - low == 1:
            yield low, pmf
            return
        mid = (low + high) // 2
        left = pmf.copy()
        left_size = _absorb(left, size, probs[mid:high])
        yield from descend(low, mid, left, left_size)
        right_size = _absorb(pmf, size, probs[low:mid])
        yield from descend(mid, high, pmf, right_size)

    yield from descend(0, item_count, root, 0)


def poisson_binomial_moments(probs: Sequence[float] | np.ndarray) -> PoissonBinomialMoments:
    values = _validated_probs(probs)
    return PoissonBinomialMoments(
        mu=float(np.sum(values)),
        sigma2=float(np.sum(values * (1.0 - values))),
    )
