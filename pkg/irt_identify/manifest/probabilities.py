"""Manifest probabilities, rest-score distributions and their conditionals."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from ..config import MAX_ENUMERATION_ITEMS, PMF_FLOOR, QUADRATURE_TOLERANCE
from ..errors import DomainError, EnumerationLimitError
from ..utils import compensated_column_sums
from .model import ModelSpec, PatternQuery
from .poisson_binomial import leave_one_out_pmfs_nodes, poisson_binomial_pmf_nodes
from .quadrature import QuadratureRule, build_quadrature_rule, default_rule, integrate

logger = logging.getLogger(__name__)

RegionMask = Callable[[np.ndarray], np.ndarray]


def joint_prob(
    model: ModelSpec,
    query: PatternQuery | Sequence[int],
    rule: QuadratureRule | None = None,
    tolerance: float = QUADRATURE_TOLERANCE,
) -> float:
    """P(Y_i = 1 for every i in the query) = integral of the product of IRFs over (0, 1)."""
    pattern = query if isinstance(query, PatternQuery) else PatternQuery(indices=tuple(query))
    pattern.validate_for(model)

    def integrand(theta: np.ndarray) -> np.ndarray:
        return np.prod(model.eval_matrix(theta, pattern.indices), axis=0)

    return integrate(integrand, rule, tolerance)


@dataclass(frozen=True)
class ManifestTable:
    """
    Probabilities of all 2^n response patterns.

    Index bits are read with item 0 as the most significant bit, so index 1 of a
    two-item table is the pattern (Y_0, Y_1) = (0, 1).
    """

    n: int
    probabilities: np.ndarray

    def probability(self, pattern: Sequence[int]) -> float:
        if len(pattern) != self.n or any(bit not in (0, 1) for bit in pattern):
            raise DomainError(f"pattern must be {self.n} binary responses, got {pattern!r}")
        index = 0
        for bit in pattern:
            index = (index << 1) | bit
        return float(self.probabilities[index])

    def patterns(self) -> np.ndarray:
        """(2^n, n) array of response patterns in table order."""
        indices = np.arange(2**self.n)[:, None]
        shifts = np.arange(self.n - 1, -1, -1)[None, :]
        return (indices >> shifts) & 1

    def marginal(self, indices: Iterable[int]) -> float:
        """P(Y_i = 1 for all i in indices), summed from the table."""
        selected = list(indices)
        mask = np.all(self.patterns()[:, selected] == 1, axis=1)
        return float(np.sum(self.probabilities[mask]))


def full_manifest(model: ModelSpec, rule: QuadratureRule | None = None) -> ManifestTable:
    """Integrate prod P^y (1-P)^(1-y) for every pattern; refuses n > 20."""
    if model.n > MAX_ENUMERATION_ITEMS:
        raise EnumerationLimitError(
            f"full manifest enumeration is limited to {MAX_ENUMERATION_ITEMS} items, got {model.n}"
        )
    active_rule = rule or default_rule()
    values = model.eval_matrix(active_rule.nodes)
    pattern_count = 2**model.n
    # Chunk nodes so the (patterns, chunk) work array stays near 2^22 entries
    chunk = max(1, (1 << 22) // pattern_count)

    totals = np.zeros(pattern_count)
    item_major = _bit_reversal(model.n)
    for start in range(0, active_rule.size, chunk):
        stop = min(start + chunk, active_rule.size)
        table = np.ones((1, stop - start))
        # each stacked item lands in the most significant bit, so item 0 ends up last
        for row in values[:, start:stop]:
            table = np.vstack([table * (1.0 - row), table * row])
        totals += table[item_major] @ active_rule.weights[start:stop]
    return ManifestTable(n=model.n, probabilities=totals)


def _bit_reversal(n: int) -> np.ndarray:
    """Permutation reversing n-bit indices so item 0 becomes the most significant bit."""
    indices = np.arange(2**n)
    reversed_indices = np.zeros_like(indices)
    for bit in range(n):
        reversed_indices |= ((indices >> bit) & 1) << (n - 1 - bit)
    return reversed_indices


@dataclass(frozen=True)
class RestScoreTable:
    """
    Distribution of the rest score for one excluded item.

    pmf[k] = P(E_{n,k}) with E_{n,k} = {rest score = k / (n-1)}. Conditionals are
    NaN where pmf[k] falls below PMF_FLOOR (`defined` is False there).
    cond_trait_outside is integrated directly, so it resolves tail masses far
    below the rounding error of 1 - cond_trait_tail.
    """

    excluded_item: int
    n_items: int
    pmf: np.ndarray
    cond_item: np.ndarray
    defined: np.ndarray
    delta: float | None = None
    cond_trait_tail: np.ndarray | None = None
    cond_trait_outside: np.ndarray | None = None

    @property
    def ks(self) -> np.ndarray:
        return np.arange(self.n_items)


def _rest_score_node_pmfs(model: ModelSpec, excluded_item: int, nodes: np.ndarray) -> np.ndarray:
    rest = model.require_rest_items(excluded_item)
    return poisson_binomial_pmf_nodes(model.eval_matrix(nodes, rest))


def rest_score_region_mass(
    model: ModelSpec,
    excluded_item: int,
    region: RegionMask,
    breakpoints: Iterable[float] = (),
) -> np.ndarray:
    """
    Array over k of the integral of PB_theta(k) over the region {theta: region(theta)}.

    Region edges should be passed as breakpoints so the indicator is exact per panel.
    """
    rule = build_quadrature_rule(breakpoints=tuple(breakpoints))
    node_pmfs = _rest_score_node_pmfs(model, excluded_item, rule.nodes)
    weights = np.where(region(rule.nodes), rule.weights, 0.0)
    return compensated_column_sums(weights, node_pmfs.T)


def _safe_ratio(numerator: np.ndarray, denominator: np.ndarray, defined: np.ndarray) -> np.ndarray:
    result = np.full(numerator.shape, np.nan)
    result[defined] = numerator[defined] / denominator[defined]
    return result


def rest_score_table(
    model: ModelSpec,
    excluded_item: int,
    delta: float | None = None,
) -> RestScoreTable:
    """
    Exact rest-score PMF and conditionals P(Y_i = 1 | E_{n,k}).

    With delta, also P(Theta in I_delta | E_{n,k}) for I_delta = (delta, 1 - delta)
    and its complement.
    """
    rule = _table_rule(delta)
    node_pmfs = _rest_score_node_pmfs(model, excluded_item, rule.nodes)
    target = np.asarray(model.items[excluded_item].eval(rule.nodes), dtype=float)
    return _assemble_table(model.n, excluded_item, rule, node_pmfs, target, delta)


def rest_score_tables(model: ModelSpec, delta: float | None = None) -> list[RestScoreTable]:
    """
    Rest-score tables for every item, in item order.

    Equal to calling rest_score_table per item up to summation order, but the
    rest-score PMFs come from one leave-one-out recursion over all items.
    """
    model.require_rest_items(0)
    rule = _table_rule(delta)
    values = model.eval_matrix(rule.nodes)
    tables: dict[int, RestScoreTable] = {}
    for item, node_pmfs in leave_one_out_pmfs_nodes(values):
        tables[item] = _assemble_table(model.n, item, rule, node_pmfs, values[item], delta)
    logger.debug("assembled %d rest-score tables from one recursion", model.n)
    return [tables[item] for item in range(model.n)]


def _table_rule(delta: float | None) -> QuadratureRule:
    if delta is not None and not (0.0 < delta < 0.5):
        raise DomainError(f"delta must lie in (0, 1/2), got {delta}")
    if delta is None:
        return default_rule()
    return build_quadrature_rule(breakpoints=(delta, 1.0 - delta))


def _assemble_table(
    n_items: int,
    excluded_item: int,
    rule: QuadratureRule,
    node_pmfs: np.ndarray,
    target: np.ndarray,
    delta: float | None,
) -> RestScoreTable:
    pmf = compensated_column_sums(rule.weights, node_pmfs.T)
    joint = compensated_column_sums(rule.weights * target, node_pmfs.T)
    defined = pmf > PMF_FLOOR
    if not np.all(defined):
        logger.warning(
            "Rest-score conditionals undefined for item %d at k=%s",
            excluded_item,
            np.flatnonzero(~defined).tolist(),
        )
    cond_item = np.clip(_safe_ratio(joint, pmf, defined), 0.0, 1.0)

    cond_trait_tail = cond_trait_outside = None
    if delta is not None:
        inside = (rule.nodes > delta) & (rule.nodes < 1.0 - delta)
        inside_mass = compensated_column_sums(np.where(inside, rule.weights, 0.0), node_pmfs.T)
        outside_mass = compensated_column_sums(np.where(inside, 0.0, rule.weights), node_pmfs.T)
        cond_trait_tail = _safe_ratio(inside_mass, pmf, defined)
        cond_trait_outside = _safe_ratio(outside_mass, pmf, defined)

    return RestScoreTable(
        excluded_item=excluded_item,
        n_items=n_items,
        pmf=pmf,
        cond_item=cond_item,
        defined=defined,
        delta=delta,
        cond_trait_tail=cond_trait_tail,
        cond_trait_outside=cond_trait_outside,
    )
