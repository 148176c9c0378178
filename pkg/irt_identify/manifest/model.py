"""Item collections on the U(0,1) trait and manifest pattern queries."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from pydantic import BaseModel, field_validator

from ..errors import DomainError, ModelValidationError
from ..irf import Irf, ItemParams, make_irf


@dataclass(frozen=True)
class ModelSpec:
    """
    Ordered IRFs sharing the fixed U(0,1) trait.

    Other continuous traits enter only through the reparameterization in
    `irf.transform_irf`. Items are addressed by 0-based index.
    """

    items: tuple[Irf, ...]

    def __post_init__(self) -> None:
        if not self.items:
            raise ModelValidationError("a model needs at least one item")
        for index, irf in enumerate(self.items):
            if irf.params is not None and irf.params.a == 0.0:
                raise ModelValidationError(
                    f"item {index} has a=0: a flat IRF violates the derivative lower bound",
                    item_index=index,
                )

    @classmethod
    def from_params(cls, params: Iterable[ItemParams]) -> "ModelSpec":
        return cls(items=tuple(make_irf(item) for item in params))

    @classmethod
    def homogeneous(cls, params: ItemParams, n: int) -> "ModelSpec":
        irf = make_irf(params)
        return cls(items=(irf,) * n)

    @property
    def n(self) -> int:
        return len(self.items)

    @property
    def params(self) -> list[ItemParams | None]:
        return [irf.params for irf in self.items]

    def require_item(self, index: int) -> Irf:
        if not 0 <= index < self.n:
            raise DomainError(f"item index {index} outside 0..{self.n - 1}")
        return self.items[index]

    def require_rest_items(self, excluded_item: int) -> list[int]:
        """Indices of every item except `excluded_item`; needs n >= 2."""
        self.require_item(excluded_item)
        if self.n < 2:
            raise ModelValidationError("rest-score computations need at least two items")
        return [index for index in range(self.n) if index != excluded_item]

    def eval_matrix(self, theta: np.ndarray, indices: Sequence[int] | None = None) -> np.ndarray:
        """(items, nodes) matrix of IRF values; identical Irf objects are evaluated once."""
        selected = range(self.n) if indices is None else indices
        cache: dict[int, np.ndarray] = {}
        rows = []
        for index in selected:
            irf = self.items[index]
            key = id(irf)
            if key not in cache:
                cache[key] = np.asarray(irf.eval(theta), dtype=float)
            rows.append(cache[key])
        if not rows:
            return np.empty((0, np.size(theta)))
        return np.vstack(rows)

    def kappa_gamma(self, indices: Sequence[int]) -> tuple[np.ndarray, np.ndarray]:
        kappas = np.array([self.items[index].kappa for index in indices])
        gammas = np.array([self.items[index].gamma for index in indices])
        return kappas, gammas


class PatternQuery(BaseModel):
    """Nonempty set of distinct item indices whose responses are all 1."""

    indices: tuple[int, ...]

    @field_validator("indices")
    @classmethod
    def _check_indices(cls, value: tuple[int, ...]) -> tuple[int, ...]:
        if not value:
            raise ValueError("pattern query needs at least one item")
        if len(set(value)) != len(value):
            raise ValueError("pattern query indices must be distinct")
        if min(value) < 0:
            raise ValueError("pattern query indices must be non-negative")
        return value

    def validate_for(self, model: ModelSpec) -> None:
        if max(self.indices) >= model.n:
            raise DomainError(f"pattern query {self.indices} exceeds model size {model.n}")
