"""Simulation, convergence experiments and bound checks."""

from .bounds import (
    BoundCheckReport,
    LemmaCheckConfig,
    SigmaGrowthReport,
    all_passed,
    check_hoeffding,
    check_lemma1,
    check_lemma2,
    check_normal_approx,
    check_sigma_growth,
    check_step1_bound,
    check_window_concentration,
    hoeffding_bound,
    mean_irf_knots,
)
from .convergence import ConvergenceReport, convergence_experiment, log_log_slope, tail_interval
from .presets import PRESETS, FamilySampler, heterogeneous_4pl, resolve_preset
from .simulation import SimConfig, make_generator, pattern_frequencies, simulate_responses

__all__ = [
    "PRESETS",
    "BoundCheckReport",
    "ConvergenceReport",
    "FamilySampler",
    "LemmaCheckConfig",
    "SigmaGrowthReport",
    "SimConfig",
    "all_passed",
    "check_hoeffding",
    "check_lemma1",
    "check_lemma2",
    "check_normal_approx",
    "check_sigma_growth",
    "check_step1_bound",
    "check_window_concentration",
    "convergence_experiment",
    "heterogeneous_4pl",
    "hoeffding_bound",
    "log_log_slope",
    "make_generator",
    "mean_irf_knots",
    "pattern_frequencies",
    "resolve_preset",
    "simulate_responses",
    "tail_interval",
]
