"""Parametric IRF families, reparameterization, and condition checkers."""

from .conditions import (
    DerivativeBounds,
    DerivativeLimits,
    EndpointLimit,
    ItemConditionReport,
    LimitKind,
    SequenceConditionReport,
    TailFlatnessWitness,
    check_condition3,
    check_condition4,
    condition_constants,
    derivative_limits,
    sequence_condition_report,
)
from .families import (
    STANDARD_NORMAL_TRAIT,
    Irf,
    IrtFamily,
    ItemBank,
    ItemParams,
    LatentIrf,
    LatentTrait,
    deriv_4pl,
    eval_4pl,
    four_pl_params,
    identity_irf,
    latent_irf,
    make_irf,
    normal_ogive_params,
    normalize_params,
    rasch_params,
    three_pl_params,
    transform_irf,
    two_pl_params,
)

__all__ = [
    "STANDARD_NORMAL_TRAIT",
    "DerivativeBounds",
    "DerivativeLimits",
    "EndpointLimit",
    "Irf",
    "IrtFamily",
    "ItemBank",
    "ItemConditionReport",
    "ItemParams",
    "LatentIrf",
    "LatentTrait",
    "LimitKind",
    "SequenceConditionReport",
    "TailFlatnessWitness",
    "check_condition3",
    "check_condition4",
    "condition_constants",
    "deriv_4pl",
    "derivative_limits",
    "eval_4pl",
    "four_pl_params",
    "identity_irf",
    "latent_irf",
    "make_irf",
    "normal_ogive_params",
    "normalize_params",
    "rasch_params",
    "sequence_condition_report",
    "three_pl_params",
    "transform_irf",
    "two_pl_params",
]
