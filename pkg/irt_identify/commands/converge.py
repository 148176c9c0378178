"""converge: recovery error against the number of items for a preset family."""

from __future__ import annotations

import argparse

from ..experiments import PRESETS, convergence_experiment, resolve_preset
from ..files import format_csv
from ..utils import parse_count_list
from .shared import (
    EXIT_CHECK_FAILED,
    EXIT_OK,
    add_common_arguments,
    add_interval_arguments,
    emit_csv,
    emit_json,
    start_manifest,
)

DEFAULT_N_GRID = "25,50,100,200,400"
CSV_HEADER = ("n", "max_sup_error", "tail_low", "tail_high", "tail_sup_error", "full_bound")


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("converge", help="Measure oracle recovery error along an n grid.")
    parser.add_argument("--preset", required=True, choices=sorted(PRESETS))
    parser.add_argument("--n-grid", default=DEFAULT_N_GRID, help="Comma-separated item counts.")
    add_interval_arguments(parser, 0.1, 0.9)
    parser.add_argument(
        "--epsilon",
        type=float,
        default=0.05,
        help="Tail flatness level for the whole-interval bound max(2 epsilon, tail error).",
    )
    add_common_arguments(parser, formats=("json", "csv"))
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    manifest = start_manifest("converge", args)
    n_grid = parse_count_list(args.n_grid)
    report = convergence_experiment(
        resolve_preset(args.preset, args.seed), n_grid, args.alpha, args.beta, epsilon=args.epsilon
    )
    if args.format == "csv":
        rows = [
            (n, error, low, high, tail_error, bound)
            for n, error, (low, high), tail_error, bound in zip(
                report.n_grid, report.errors, report.tail_intervals, report.tail_errors, report.full_bounds
            )
        ]
        emit_csv(format_csv(CSV_HEADER, rows), manifest, args.out)
    else:
        emit_json({"report": report.model_dump(mode="json")}, manifest, args.out)
    return EXIT_OK if report.decreasing else EXIT_CHECK_FAILED
