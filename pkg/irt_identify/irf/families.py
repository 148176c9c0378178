"""Parametric IRF families and the reparameterization onto a U(0,1) trait."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterator, Sequence, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from ..errors import DomainError
from ..special_fns import logistic, normal_cdf, normal_quantile

ArrayLike = Union[float, np.ndarray]

_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


class IrtFamily(str, Enum):
    NORMAL_OGIVE = "normal-ogive"
    LOGISTIC_4PL = "4pl"

    @classmethod
    def parse(cls, raw_value: str) -> "IrtFamily":
        """Accept the canonical names plus common spellings used in item files."""
        normalized = raw_value.strip().lower().replace("_", "-")
        aliases = {
            "normal-ogive": cls.NORMAL_OGIVE,
            "normalogive": cls.NORMAL_OGIVE,
            "ogive": cls.NORMAL_OGIVE,
            "4pl": cls.LOGISTIC_4PL,
            "logistic4pl": cls.LOGISTIC_4PL,
            "logistic-4pl": cls.LOGISTIC_4PL,
        }
        if normalized not in aliases:
            raise ValueError(f"Unknown IRF family {raw_value!r}")
        return aliases[normalized]


class ItemParams(BaseModel):
    """Parameter vector (a, b, c, d) of a parametric IRF family."""

    model_config = ConfigDict(frozen=True)

    family: IrtFamily
    a: float
    b: float
    c: float = 0.0
    d: float = 1.0

    @field_validator("family", mode="before")
    @classmethod
    def _parse_family(cls, value):
        if isinstance(value, str) and not isinstance(value, IrtFamily):
            return IrtFamily.parse(value)
        return value

    @field_validator("a", "b", "c", "d")
    @classmethod
    def _require_finite(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError("item parameters must be finite")
        return value

    @model_validator(mode="after")
    def _check_asymptotes(self) -> "ItemParams":
        if self.family is IrtFamily.NORMAL_OGIVE:
            if self.c != 0.0 or self.d != 1.0:
                raise ValueError("normal-ogive items have fixed asymptotes c=0, d=1")
        elif not (0.0 <= self.c < self.d <= 1.0):
            raise ValueError("4PL items require 0 <= c < d <= 1")
        return self


def normal_ogive_params(a: float, b: float) -> ItemParams:
    return ItemParams(family=IrtFamily.NORMAL_OGIVE, a=a, b=b)


def four_pl_params(a: float, b: float, c: float, d: float) -> ItemParams:
    return ItemParams(family=IrtFamily.LOGISTIC_4PL, a=a, b=b, c=c, d=d)


def rasch_params(b: float) -> ItemParams:
    """Rasch item as a 4PL specialization (a=1, c=0, d=1)."""
    return four_pl_params(1.0, b, 0.0, 1.0)


def two_pl_params(a: float, b: float) -> ItemParams:
    return four_pl_params(a, b, 0.0, 1.0)


def three_pl_params(a: float, b: float, c: float) -> ItemParams:
    return four_pl_params(a, b, c, 1.0)


def normalize_params(params: ItemParams) -> tuple[ItemParams, bool]:
    """
    Map a decreasing item (a < 0) onto an increasing one on the reflected trait.

    P(1 - theta) with slope a and location b equals the same family with
    slope -a and location -b, so the reflected item keeps its asymptotes.
    """
    if params.a >= 0.0:
        return params, False
    return params.model_copy(update={"a": -params.a, "b": -params.b}), True


@dataclass(frozen=True)
class LatentTrait:
    """Continuous trait distribution used by the reparameterization."""

    name: str
    cdf: Callable[[ArrayLike], ArrayLike]
    quantile: Callable[[ArrayLike], ArrayLike]
    log_density: Callable[[ArrayLike], ArrayLike]


def _normal_log_density(x: ArrayLike) -> ArrayLike:
    values = np.asarray(x, dtype=float)
    return -0.5 * values * values - _LOG_SQRT_2PI


STANDARD_NORMAL_TRAIT = LatentTrait(
    name="standard-normal",
    cdf=normal_cdf,
    quantile=normal_quantile,
    log_density=_normal_log_density,
)


@dataclass(frozen=True)
class LatentIrf:
    """IRF Q(lambda) on the latent scale with its log-derivative."""

    value: Callable[[np.ndarray], np.ndarray]
    log_deriv: Callable[[np.ndarray], np.ndarray]
    kappa: float
    gamma: float


def _log_logistic_deriv(z: np.ndarray) -> np.ndarray:
    magnitude = np.abs(z)
    return -magnitude - 2.0 * np.log1p(np.exp(-magnitude))


def latent_irf(params: ItemParams) -> LatentIrf:
    """Latent-scale IRF Q for a (normalized) parameter vector."""
    a, b = params.a, params.b
    log_slope = math.log(a) if a > 0.0 else -math.inf

    if params.family is IrtFamily.NORMAL_OGIVE:

        def value(lam: np.ndarray) -> np.ndarray:
            return np.asarray(normal_cdf(a * (lam - b)))

        def log_deriv(lam: np.ndarray) -> np.ndarray:
            return log_slope + _normal_log_density(a * (lam - b))

        return LatentIrf(value=value, log_deriv=log_deriv, kappa=0.0, gamma=1.0)

    c, d = params.c, params.d
    log_scale = log_slope + math.log(d - c) if a > 0.0 else -math.inf

    def value_4pl(lam: np.ndarray) -> np.ndarray:
        return c + (d - c) * np.asarray(logistic(a * (lam - b)))

    def log_deriv_4pl(lam: np.ndarray) -> np.ndarray:
        return log_scale + _log_logistic_deriv(a * (lam - b))

    return LatentIrf(value=value_4pl, log_deriv=log_deriv_4pl, kappa=c, gamma=d)


def _require_open_unit(theta: ArrayLike) -> np.ndarray:
    values = np.asarray(theta, dtype=float)
    if not np.all((values > 0.0) & (values < 1.0)):
        raise DomainError(f"IRFs are defined on the open interval (0, 1), got {theta!r}")
    return values


@dataclass(frozen=True)
class Irf:
    """
    Item response function on the U(0,1) trait scale.

    eval and deriv accept scalars or arrays; both reject theta outside (0, 1).
    `params` is None for IRFs built from an arbitrary latent model.
    """

    latent: LatentIrf
    trait: LatentTrait
    params: ItemParams | None = None
    reflected: bool = False

    @property
    def kappa(self) -> float:
        return self.latent.kappa

    @property
    def gamma(self) -> float:
        return self.latent.gamma

    def eval(self, theta: ArrayLike) -> ArrayLike:
        values = _require_open_unit(theta)
        result = self.latent.value(np.asarray(self.trait.quantile(values), dtype=float))
        if np.ndim(theta) == 0:
            return float(result)
        return result

    def deriv(self, theta: ArrayLike) -> ArrayLike:
        """Chain rule P'(theta) = Q'(F^-1(theta)) / f(F^-1(theta)), in log space."""
        values = _require_open_unit(theta)
        lam = np.asarray(self.trait.quantile(values), dtype=float)
        with np.errstate(over="ignore"):
            result = np.exp(self.latent.log_deriv(lam) - self.trait.log_density(lam))
        if np.ndim(theta) == 0:
            return float(result)
        return result


# Cap on (items, points) entries per block when evaluating a bank
BANK_BLOCK_ENTRIES = 1 << 20


@dataclass(frozen=True)
class ItemBank:
    """
    Weighted parametric IRFs evaluated together as (items, points) arrays.

    Rows follow the same normal-ogive and 4PL formulas as `latent_irf`, so a
    bank's weighted sums agree with summing Irf.eval up to rounding order.
    """

    ogive_a: np.ndarray
    ogive_b: np.ndarray
    ogive_weight: np.ndarray
    logistic_a: np.ndarray
    logistic_b: np.ndarray
    logistic_c: np.ndarray
    logistic_spread: np.ndarray
    logistic_weight: np.ndarray

    @classmethod
    def from_irfs(cls, irfs: Sequence[Irf], weights: Sequence[float]) -> "ItemBank | None":
        """None unless every IRF is parametric on the standard normal trait."""
        if any(irf.params is None or irf.trait is not STANDARD_NORMAL_TRAIT for irf in irfs):
            return None
        # rows of (a, b, c, d - c, weight) per family
        rows: dict[IrtFamily, list[tuple[float, ...]]] = {family: [] for family in IrtFamily}
        for irf, weight in zip(irfs, weights):
            params = irf.params
            rows[params.family].append((params.a, params.b, params.c, params.d - params.c, float(weight)))
        ogive = np.array(rows[IrtFamily.NORMAL_OGIVE], dtype=float).reshape(-1, 5)
        four_pl = np.array(rows[IrtFamily.LOGISTIC_4PL], dtype=float).reshape(-1, 5)
        return cls(
            ogive_a=ogive[:, 0],
            ogive_b=ogive[:, 1],
            ogive_weight=ogive[:, 4],
            logistic_a=four_pl[:, 0],
            logistic_b=four_pl[:, 1],
            logistic_c=four_pl[:, 2],
            logistic_spread=four_pl[:, 3],
            logistic_weight=four_pl[:, 4],
        )

    @property
    def size(self) -> int:
        return self.ogive_a.size + self.logistic_a.size

    def _blocks(self, theta: ArrayLike) -> Iterator[tuple[slice, np.ndarray]]:
        values = _require_open_unit(theta).ravel()
        lam = np.asarray(normal_quantile(values), dtype=float)
        step = max(1, BANK_BLOCK_ENTRIES // max(1, self.size))
        for start in range(0, lam.size, step):
            yield slice(start, start + step), lam[start : start + step]

    def weighted_sum(self, theta: ArrayLike) -> np.ndarray:
        """sum_j w_j P_j(theta) as a flat array over theta."""
        total = np.zeros(np.size(theta))
        for block, lam in self._blocks(theta):
            if self.ogive_a.size:
                z = self.ogive_a[:, None] * (lam[None, :] - self.ogive_b[:, None])
                total[block] += self.ogive_weight @ np.asarray(normal_cdf(z))
            if self.logistic_a.size:
                z = self.logistic_a[:, None] * (lam[None, :] - self.logistic_b[:, None])
                total[block] += self.logistic_weight @ self.logistic_c
                total[block] += (self.logistic_weight * self.logistic_spread) @ np.asarray(logistic(z))
        return total

    def weighted_deriv_sum(self, theta: ArrayLike) -> np.ndarray:
        """sum_j w_j P_j'(theta), each term evaluated in log space as in Irf.deriv."""
        total = np.zeros(np.size(theta))
        for block, lam in self._blocks(theta):
            log_trait = _normal_log_density(lam)[None, :]
            with np.errstate(over="ignore"):
                if self.ogive_a.size:
                    z = self.ogive_a[:, None] * (lam[None, :] - self.ogive_b[:, None])
                    log_terms = np.log(self.ogive_a)[:, None] + _normal_log_density(z) - log_trait
                    total[block] += self.ogive_weight @ np.exp(log_terms)
                if self.logistic_a.size:
                    z = self.logistic_a[:, None] * (lam[None, :] - self.logistic_b[:, None])
                    log_scale = np.log(self.logistic_a * self.logistic_spread)[:, None]
                    log_terms = log_scale + _log_logistic_deriv(z) - log_trait
                    total[block] += self.logistic_weight @ np.exp(log_terms)
        return total


def transform_irf(latent: LatentIrf, trait: LatentTrait = STANDARD_NORMAL_TRAIT) -> Irf:
    """Reparameterize a latent-scale IRF onto Theta = F(Lambda) ~ U(0,1)."""
    return Irf(latent=latent, trait=trait)


def make_irf(params: ItemParams) -> Irf:
    """
    Build the U(0,1)-scale IRF for a parameter vector, normalizing a < 0.

    A decreasing item comes back as the increasing IRF of the reflected trait
    (`reflected` is set), so eval(theta) there equals the raw formula at 1 - theta.
    """
    normalized, reflected = normalize_params(params)
    return Irf(
        latent=latent_irf(normalized),
        trait=STANDARD_NORMAL_TRAIT,
        params=normalized,
        reflected=reflected,
    )


def identity_irf() -> Irf:
    """P(theta) = theta: the normal ogive with a=1, b=0."""
    return make_irf(normal_ogive_params(1.0, 0.0))


def _require_4pl(params: ItemParams) -> None:
    if params.family is not IrtFamily.LOGISTIC_4PL:
        raise DomainError("eval_4pl/deriv_4pl require a 4PL parameter vector")


def _mirror(theta: ArrayLike) -> ArrayLike:
    return 1.0 - np.asarray(theta, dtype=float) if np.ndim(theta) else 1.0 - float(theta)


def eval_4pl(params: ItemParams, theta: ArrayLike) -> ArrayLike:
    """
    c + (d - c) g[a(Phi^-1(theta) - b)] at the given theta.

    For a < 0 this is the decreasing curve; make_irf's reflected IRF is read
    at 1 - theta to produce it.
    """
    _require_4pl(params)
    irf = make_irf(params)
    if irf.reflected:
        return irf.eval(_mirror(theta))
    return irf.eval(theta)


def deriv_4pl(params: ItemParams, theta: ArrayLike) -> ArrayLike:
    """(d - c) a g'[a(Phi^-1(theta) - b)] / phi[Phi^-1(theta)]; negative when a < 0."""
    _require_4pl(params)
    irf = make_irf(params)
    if irf.reflected:
        return -irf.deriv(_mirror(theta))
    return irf.deriv(theta)
