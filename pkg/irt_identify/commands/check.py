"""check: derivative bounds, tail witnesses and endpoint limits per item."""

from __future__ import annotations

import argparse

from ..config import CONDITION_GRID_SIZE
from ..irf import sequence_condition_report
from .shared import (
    EXIT_CHECK_FAILED,
    EXIT_OK,
    add_common_arguments,
    add_interval_arguments,
    emit_json,
    load_model,
    start_manifest,
)


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("check", help="Check derivative bounds and tail flatness for a model.")
    parser.add_argument("--model", help="Model file (family a b c d per line).")
    parser.add_argument("--preset", help="Preset family used when --model is absent.")
    parser.add_argument("--n-items", type=int, help="Item count for --preset.")
    parser.add_argument("--epsilon", type=float, default=0.05, help="Tail flatness level.")
    parser.add_argument("--grid-size", type=int, default=CONDITION_GRID_SIZE)
    add_interval_arguments(parser, 0.05, 0.95)
    add_common_arguments(parser, formats=("json",))
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    manifest = start_manifest("check", args)
    model = load_model(args)
    report = sequence_condition_report(model.items, args.alpha, args.beta, args.epsilon, args.grid_size)
    emit_json({"report": report.model_dump(mode="json")}, manifest, args.out)
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED
