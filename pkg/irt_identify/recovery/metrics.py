"""Sup-norm distances between IRF collections on a theta grid."""

from __future__ import annotations

from typing import Callable, Sequence, Union

import numpy as np
from pydantic import BaseModel, model_validator

from ..errors import DomainError
from ..manifest import ModelSpec
from .empirical import EmpiricalRecovery
from .oracle import RecoveryGrid

DEFAULT_SUP_GRID = 201

Curve = Callable[[np.ndarray], np.ndarray]
IrfCollection = Union[ModelSpec, RecoveryGrid, EmpiricalRecovery, Sequence[Union[RecoveryGrid, EmpiricalRecovery]]]


class SupDiffReport(BaseModel):
    per_item: list[float]
    max_over_items: float
    alpha: float | None = None
    beta: float | None = None
    grid_size: int

    @model_validator(mode="after")
    def _check_max(self) -> "SupDiffReport":
        if any(value < 0.0 for value in self.per_item):
            raise ValueError("sup differences are non-negative")
        if self.per_item and self.max_over_items != max(self.per_item):
            raise ValueError("max_over_items must equal the largest per-item value")
        return self

    @property
    def full_range(self) -> bool:
        return self.alpha is None


def _curves(collection: IrfCollection) -> list[Curve]:
    if isinstance(collection, ModelSpec):
        return [irf.eval for irf in collection.items]
    if isinstance(collection, (RecoveryGrid, EmpiricalRecovery)):
        return [collection.evaluate]
    return [grid.evaluate for grid in collection]


def sup_grid(interval: tuple[float, float] | None, grid: int) -> np.ndarray:
    """Closed grid on [alpha, beta], or interior points of (0, 1) when interval is None."""
    if grid < 1:
        raise DomainError(f"grid must hold at least one point, got {grid}")
    if interval is None:
        return np.linspace(0.0, 1.0, grid + 2)[1:-1]
    alpha, beta = interval
    if not 0.0 < alpha <= beta < 1.0:
        raise DomainError(f"interval must satisfy 0 < alpha <= beta < 1, got {interval}")
    return np.linspace(alpha, beta, grid)


def sup_diff(
    first: IrfCollection,
    second: IrfCollection,
    interval: tuple[float, float] | None = None,
    grid: int = DEFAULT_SUP_GRID,
) -> SupDiffReport:
    """
    Per-item max |P_i - P*_i| over a theta grid.

    Recovery grids are compared through linear interpolation between their knots.
    """
    left, right = _curves(first), _curves(second)
    if len(left) != len(right):
        raise DomainError(f"cannot compare {len(left)} items against {len(right)} items")
    thetas = sup_grid(interval, grid)
    per_item = [
        float(np.max(np.abs(np.asarray(a(thetas), dtype=float) - np.asarray(b(thetas), dtype=float))))
        for a, b in zip(left, right)
    ]
    return SupDiffReport(
        per_item=per_item,
        max_over_items=max(per_item) if per_item else 0.0,
        alpha=None if interval is None else interval[0],
        beta=None if interval is None else interval[1],
        grid_size=thetas.size,
    )
