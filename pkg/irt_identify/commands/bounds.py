"""bounds: concentration and normal-approximation checks as JSON reports."""

from __future__ import annotations

import argparse
from typing import Callable

from ..experiments import (
    PRESETS,
    BoundCheckReport,
    LemmaCheckConfig,
    all_passed,
    check_hoeffding,
    check_lemma1,
    check_lemma2,
    check_normal_approx,
    check_step1_bound,
    check_window_concentration,
    resolve_preset,
)
from ..utils import parse_count_list
from .shared import EXIT_CHECK_FAILED, EXIT_OK, add_common_arguments, emit_json, item_index, load_model, start_manifest


def _lemma_config(args: argparse.Namespace) -> LemmaCheckConfig:
    return LemmaCheckConfig(
        delta=args.delta,
        eta=args.eta,
        alpha=args.alpha,
        beta=args.beta,
        n_grid=parse_count_list(args.n_grid),
        m=args.m,
    )


def _lemma1(args: argparse.Namespace) -> list[BoundCheckReport]:
    return check_lemma1(resolve_preset(args.preset, args.seed), args.k_ratio, _lemma_config(args))


def _lemma2(args: argparse.Namespace) -> list[BoundCheckReport]:
    return check_lemma2(resolve_preset(args.preset, args.seed), args.k_ratio, _lemma_config(args))


def _window(args: argparse.Namespace) -> list[BoundCheckReport]:
    return check_window_concentration(resolve_preset(args.preset, args.seed), args.k_ratio, _lemma_config(args))


def _hoeffding(args: argparse.Namespace) -> list[BoundCheckReport]:
    model = load_model(args)
    return [check_hoeffding(model, item_index(args, model.n), args.theta, args.m, args.trials, args.seed)]


def _normal_approx(args: argparse.Namespace) -> list[BoundCheckReport]:
    model = load_model(args)
    k = args.k if args.k is not None else (model.n - 1) // 2
    return [check_normal_approx(model, item_index(args, model.n), args.theta, k)]


def _step1(args: argparse.Namespace) -> list[BoundCheckReport]:
    model = load_model(args)
    return check_step1_bound(model, item_index(args, model.n), args.alpha, args.beta, args.trials, args.seed)


SELECTORS: dict[str, Callable[[argparse.Namespace], list[BoundCheckReport]]] = {
    "lemma1": _lemma1,
    "lemma2": _lemma2,
    "window": _window,
    "hoeffding": _hoeffding,
    "normal-approx": _normal_approx,
    "step1": _step1,
}


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("bounds", help="Check concentration bounds.")
    parser.add_argument("selector", choices=sorted(SELECTORS))
    parser.add_argument("--preset", default="homogeneous-identity", choices=sorted(PRESETS))
    parser.add_argument("--model", help="Model file for single-model checks.")
    parser.add_argument("--n-items", type=int, default=101, help="Preset size for single-model checks.")
    parser.add_argument("--item", type=int, default=1, help="1-based excluded item.")
    parser.add_argument("--k-ratio", type=float, default=0.5)
    parser.add_argument("--k", type=int, default=None, help="Rest-sum value for normal-approx.")
    parser.add_argument("--theta", type=float, default=0.5)
    parser.add_argument("--delta", type=float, default=0.05)
    parser.add_argument("--eta", type=float, default=0.25)
    parser.add_argument("--alpha", type=float, default=0.1)
    parser.add_argument("--beta", type=float, default=0.9)
    parser.add_argument("--m", type=float, default=0.1, help="Hoeffding radius.")
    parser.add_argument("--n-grid", default="11,21,41,81,161")
    parser.add_argument("--trials", type=int, default=100_000, help="Monte Carlo trials or step1 samples.")
    add_common_arguments(parser, formats=("json",))
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    manifest = start_manifest("bounds", args)
    reports = SELECTORS[args.selector](args)
    emit_json(
        {"selector": args.selector, "reports": [report.model_dump(mode="json") for report in reports]},
        manifest,
        args.out,
    )
    return EXIT_OK if all_passed(reports) else EXIT_CHECK_FAILED
