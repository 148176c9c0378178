"""recover: oracle recovery from a model file, or a regressogram from response data."""

from __future__ import annotations

import argparse
import logging

import numpy as np

from ..errors import DomainError
from ..files import format_csv, read_response_matrix
from ..recovery import recover_irf_empirical, recover_irf_oracle
from .shared import (
    EXIT_OK,
    add_common_arguments,
    add_interval_arguments,
    emit_csv,
    item_index,
    load_model,
    start_manifest,
)

logger = logging.getLogger(__name__)


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("recover", help="Recover one item's IRF on (alpha, beta).")
    parser.add_argument("--model", help="Model file: oracle recovery with a p_true column.")
    parser.add_argument("--preset", help="Preset family used when neither --model nor --data is given.")
    parser.add_argument("--n-items", type=int, help="Item count for --preset.")
    parser.add_argument("--data", help="Header-less 0/1 CSV: empirical regressogram.")
    parser.add_argument("--item", type=int, default=1, help="1-based item number.")
    parser.add_argument("--bins", type=int, default=None, help="Cap on regressogram bins.")
    add_interval_arguments(parser, 0.1, 0.9)
    add_common_arguments(parser)
    parser.set_defaults(handler=run)


def _run_oracle(args: argparse.Namespace) -> str:
    model = load_model(args)
    item = item_index(args, model.n)
    grid = recover_irf_oracle(model, item, args.alpha, args.beta)
    truth = np.asarray(model.items[item].eval(grid.thetas()))
    rows = [
        (entry.k, entry.theta_k, entry.p_hat, float(p_true))
        for entry, p_true in zip(grid.entries, truth)
    ]
    max_error = float(np.max(np.abs(grid.p_hats() - truth)))
    logger.info("item %d: %d knots, max |p_hat - p_true| = %.6g", args.item, len(rows), max_error)
    return format_csv(
        ("k", "theta_k", "p_hat", "p_true"),
        rows,
        comments=(f"max_abs_error={max_error:.17g}",),
    )


def _run_empirical(args: argparse.Namespace) -> str:
    responses = read_response_matrix(args.data)
    item = item_index(args, responses.shape[1])
    recovery = recover_irf_empirical(responses, item, args.bins)
    rows = [
        (entry.rest_low, entry.rest_high, entry.count, entry.theta_hat, entry.p_hat)
        for entry in recovery.bins
        if args.alpha < entry.theta_hat < args.beta
    ]
    return format_csv(("rest_low", "rest_high", "count", "theta_k", "p_hat"), rows)


def run(args: argparse.Namespace) -> int:
    if args.data and args.model:
        raise DomainError("pass either --model or --data, not both")
    manifest = start_manifest("recover", args)
    text = _run_empirical(args) if args.data else _run_oracle(args)
    emit_csv(text, manifest, args.out)
    return EXIT_OK
