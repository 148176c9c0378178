"""Manifest distributions: quadrature, Poisson-binomial rest scores, conditionals."""

from .model import ModelSpec, PatternQuery
from .poisson_binomial import (
    PoissonBinomialMoments,
    leave_one_out_pmfs_nodes,
    poisson_binomial_moments,
    poisson_binomial_pmf,
    poisson_binomial_pmf_nodes,
)
from .probabilities import (
    ManifestTable,
    RestScoreTable,
    full_manifest,
    joint_prob,
    rest_score_region_mass,
    rest_score_table,
    rest_score_tables,
)
from .quadrature import QuadratureRule, build_quadrature_rule, default_rule, integrate

__all__ = [
    "ManifestTable",
    "ModelSpec",
    "PatternQuery",
    "PoissonBinomialMoments",
    "QuadratureRule",
    "RestScoreTable",
    "build_quadrature_rule",
    "default_rule",
    "full_manifest",
    "integrate",
    "joint_prob",
    "leave_one_out_pmfs_nodes",
    "poisson_binomial_moments",
    "poisson_binomial_pmf",
    "poisson_binomial_pmf_nodes",
    "rest_score_region_mass",
    "rest_score_table",
    "rest_score_tables",
]
