"""Constructive recovery of IRFs from manifest quantities."""

from .empirical import (
    EmpiricalBin,
    EmpiricalRecovery,
    RestScoreGroups,
    recover_all_empirical,
    recover_irf_empirical,
    rest_score_groups,
    validate_responses,
)
from .metrics import SupDiffReport, sup_diff, sup_grid
from .oracle import (
    RecoveryEntry,
    RecoveryGrid,
    RestMean,
    invert_mean_irf,
    mean_irf,
    recover_all_items,
    recover_irf_oracle,
    recovery_error,
    shared_rest_score_tables,
)

__all__ = [
    "EmpiricalBin",
    "EmpiricalRecovery",
    "RecoveryEntry",
    "RecoveryGrid",
    "RestMean",
    "RestScoreGroups",
    "SupDiffReport",
    "invert_mean_irf",
    "mean_irf",
    "recover_all_empirical",
    "recover_all_items",
    "recover_irf_empirical",
    "recover_irf_oracle",
    "recovery_error",
    "rest_score_groups",
    "shared_rest_score_tables",
    "sup_diff",
    "sup_grid",
    "validate_responses",
]
