"""simulate: write a seeded response matrix for `recover --data`."""

from __future__ import annotations

import argparse

from ..experiments import PRESETS, SimConfig, simulate_responses
from ..files import format_model, format_response_matrix, write_output
from .shared import EXIT_OK, add_common_arguments, emit_csv, load_model, start_manifest


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("simulate", help="Simulate binary responses from a model.")
    parser.add_argument("--model", help="Model file.")
    parser.add_argument("--preset", choices=sorted(PRESETS), help="Preset family used without --model.")
    parser.add_argument("--n-items", type=int, help="Item count for --preset.")
    parser.add_argument("--respondents", type=int, default=10_000)
    parser.add_argument("--model-out", help="Also write the generating items as a model file.")
    add_common_arguments(parser)
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    manifest = start_manifest("simulate", args)
    model = load_model(args)
    config = SimConfig(model=model, num_respondents=args.respondents, seed=args.seed)
    emit_csv(format_response_matrix(simulate_responses(config)), manifest, args.out)
    if args.model_out:
        write_output(format_model(params for params in model.params if params is not None), args.model_out)
    return EXIT_OK
