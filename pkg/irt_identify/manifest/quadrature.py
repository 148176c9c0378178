"""Composite Gauss-Legendre rule on (0, 1) with geometric refinement at both ends."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable

import numpy as np

from ..config import QUADRATURE_NODES, QUADRATURE_PANELS, QUADRATURE_TOLERANCE, THETA_FLOOR
from ..errors import DomainError, QuadratureError
from ..utils import compensated_sum

logger = logging.getLogger(__name__)

# Geometric tail panels stop here; the middle is split uniformly
TAIL_EDGE = 1e-2


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes/weights of the working rule plus a half-order rule for error estimates."""

    breakpoints: np.ndarray
    nodes: np.ndarray
    weights: np.ndarray
    coarse_nodes: np.ndarray
    coarse_weights: np.ndarray

    @property
    def size(self) -> int:
        return int(self.nodes.size)


@lru_cache(maxsize=16)
def _legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(order)


def default_breakpoints(panels: int = QUADRATURE_PANELS) -> np.ndarray:
    """
    Panel edges on [THETA_FLOOR, 1 - THETA_FLOOR].

    Roughly five sixteenths of the panels go geometrically into each tail,
    where IRF derivatives blow up; the rest split [TAIL_EDGE, 1 - TAIL_EDGE] evenly.
    """
    if panels < 8:
        raise DomainError(f"at least 8 panels are required, got {panels}")
    tail_panels = max(2, (panels * 5) // 16)
    middle_panels = max(1, panels - 2 * tail_panels)
    left = np.geomspace(THETA_FLOOR, TAIL_EDGE, tail_panels + 1)
    middle = np.linspace(TAIL_EDGE, 1.0 - TAIL_EDGE, middle_panels + 1)
    right = 1.0 - left[::-1]
    return np.unique(np.concatenate([left, middle, right]))


def _map_panels(breakpoints: np.ndarray, order: int) -> tuple[np.ndarray, np.ndarray]:
    reference_nodes, reference_weights = _legendre(order)
    lower = breakpoints[:-1, None]
    half_width = 0.5 * np.diff(breakpoints)[:, None]
    nodes = lower + half_width * (reference_nodes[None, :] + 1.0)
    weights = half_width * reference_weights[None, :]
    return nodes.ravel(), weights.ravel()


def build_quadrature_rule(
    panels: int = QUADRATURE_PANELS,
    nodes: int = QUADRATURE_NODES,
    breakpoints: Iterable[float] = (),
) -> QuadratureRule:
    """Composite rule; extra breakpoints make indicator integrals exact per panel."""
    if nodes < 4:
        raise DomainError(f"at least 4 nodes per panel are required, got {nodes}")
    edges = default_breakpoints(panels)
    extra = [float(point) for point in breakpoints if THETA_FLOOR < float(point) < 1.0 - THETA_FLOOR]
    if extra:
        edges = np.unique(np.concatenate([edges, np.asarray(extra)]))
    fine_nodes, fine_weights = _map_panels(edges, nodes)
    coarse_nodes, coarse_weights = _map_panels(edges, max(2, nodes // 2))
    return QuadratureRule(
        breakpoints=edges,
        nodes=fine_nodes,
        weights=fine_weights,
        coarse_nodes=coarse_nodes,
        coarse_weights=coarse_weights,
    )


@lru_cache(maxsize=1)
def default_rule() -> QuadratureRule:
    return build_quadrature_rule()


def integrate(
    integrand: Callable[[np.ndarray], np.ndarray],
    rule: QuadratureRule | None = None,
    tolerance: float = QUADRATURE_TOLERANCE,
) -> float:
    """
    Integrate a vectorized integrand over (0, 1).

    The half-order rule on the same panels gives the error estimate; exceeding
    `tolerance` raises QuadratureError carrying that estimate.
    """
    active_rule = rule or default_rule()
    fine = compensated_sum(active_rule.weights * integrand(active_rule.nodes))
    coarse = compensated_sum(active_rule.coarse_weights * integrand(active_rule.coarse_nodes))
    estimate = abs(fine - coarse)
    logger.debug("quadrature value=%.17g estimate=%.3e", fine, estimate)
    if not math.isfinite(fine) or estimate > tolerance:
        raise QuadratureError("quadrature did not converge", estimate)
    return fine
