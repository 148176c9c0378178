"""Named model families producing a ModelSpec of any size n."""

from __future__ import annotations

from typing import Callable

import numpy as np

from ..config import DEFAULT_SEED
from ..errors import DomainError
from ..irf import four_pl_params, identity_irf, make_irf, normal_ogive_params
from ..manifest import ModelSpec
from .simulation import make_generator

FamilySampler = Callable[[int], ModelSpec]
PresetFactory = Callable[[int], FamilySampler]

HETEROGENEOUS_RANGES = {
    "a": (0.5, 2.0),
    "b": (-1.5, 1.5),
    "c": (0.0, 0.25),
    "d": (0.75, 1.0),
}


def homogeneous_identity(seed: int = DEFAULT_SEED) -> FamilySampler:
    irf = identity_irf()
    return lambda n: ModelSpec(items=(irf,) * n)


def homogeneous_normal_ogive(seed: int = DEFAULT_SEED) -> FamilySampler:
    irf = make_irf(normal_ogive_params(1.0, 1.0))
    return lambda n: ModelSpec(items=(irf,) * n)


def heterogeneous_4pl(seed: int = DEFAULT_SEED) -> FamilySampler:
    """4PL items with parameters uniform on HETEROGENEOUS_RANGES, seeded by (seed, n)."""

    def sample(n: int) -> ModelSpec:
        rng = make_generator(np.random.SeedSequence([seed, n]))
        draws = {name: rng.uniform(low, high, n) for name, (low, high) in HETEROGENEOUS_RANGES.items()}
        return ModelSpec.from_params(
            four_pl_params(float(a), float(b), float(c), float(d))
            for a, b, c, d in zip(draws["a"], draws["b"], draws["c"], draws["d"])
        )

    return sample


PRESETS: dict[str, PresetFactory] = {
    "homogeneous-identity": homogeneous_identity,
    "homogeneous-normal-ogive": homogeneous_normal_ogive,
    "heterogeneous-4pl": heterogeneous_4pl,
}


def resolve_preset(name: str, seed: int = DEFAULT_SEED) -> FamilySampler:
    key = name.strip().lower()
    if key not in PRESETS:
        raise DomainError(f"unknown preset {name!r}; choose one of: {', '.join(sorted(PRESETS))}")
    return PRESETS[key](seed)
