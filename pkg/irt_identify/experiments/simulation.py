"""Seeded Monte Carlo response generation under local independence."""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..config import DEFAULT_SEED, THETA_FLOOR, WORKER_THREADS
from ..manifest import ModelSpec

logger = logging.getLogger(__name__)

# Fixed chunking keeps the stream layout independent of the worker count
SIMULATION_CHUNK = 1 << 16


def make_generator(seed: int | np.random.SeedSequence) -> np.random.Generator:
    """Counter-based Philox generator; SeedSequence children give independent streams."""
    sequence = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    return np.random.Generator(np.random.Philox(sequence))


class SimConfig(BaseModel):
    """Respondent count and seed for one simulated response matrix."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    model: ModelSpec
    num_respondents: int = Field(ge=1)
    seed: int = Field(default=DEFAULT_SEED, ge=0, lt=2**64)


def _simulate_chunk(model: ModelSpec, size: int, sequence: np.random.SeedSequence) -> np.ndarray:
    rng = make_generator(sequence)
    theta = np.clip(rng.random(size), THETA_FLOOR, 1.0 - THETA_FLOOR)
    probs = model.eval_matrix(theta)
    draws = rng.random((model.n, size))
    return (draws < probs).T.astype(np.int8)


def simulate_responses(config: SimConfig, workers: int = WORKER_THREADS) -> np.ndarray:
    """
    Draw theta ~ U(0,1) per respondent, then independent Bernoulli(P_i(theta)).

    Respondents are generated in fixed-size chunks, chunk j using the j-th child of
    SeedSequence(seed), so the output is bit-identical for any `workers`.
    """
    sizes = [
        min(SIMULATION_CHUNK, config.num_respondents - start)
        for start in range(0, config.num_respondents, SIMULATION_CHUNK)
    ]
    children = np.random.SeedSequence(config.seed).spawn(len(sizes))
    logger.info(
        "simulating %d respondents x %d items in %d chunks",
        config.num_respondents,
        config.model.n,
        len(sizes),
    )
    with ThreadPoolExecutor(max_workers=max(1, workers)) as executor:
        chunks = list(
            executor.map(lambda job: _simulate_chunk(config.model, *job), zip(sizes, children))
        )
    return np.vstack(chunks)


def pattern_frequencies(responses: np.ndarray) -> np.ndarray:
    """Empirical frequency of each response pattern, indexed with item 0 as the top bit."""
    matrix = np.asarray(responses, dtype=np.int64)
    n_items = matrix.shape[1]
    weights = 1 << np.arange(n_items - 1, -1, -1)
    counts = np.bincount(matrix @ weights, minlength=2**n_items)
    return counts / matrix.shape[0]
