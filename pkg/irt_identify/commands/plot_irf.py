"""plot-irf: emit theta, P(theta), P'(theta) on a uniform grid and both tail grids."""

from __future__ import annotations

import argparse

import numpy as np

from ..files import format_csv
from ..irf import ItemParams, make_irf
from .shared import EXIT_OK, add_common_arguments, emit_csv, start_manifest

UNIFORM_RANGE = (0.001, 0.999)
TAIL_RANGE = (1e-8, 1e-2)


def plot_grid(points: int) -> np.ndarray:
    """Uniform grid on (0.001, 0.999), then theta -> 0 and theta -> 1 geometric grids."""
    uniform = np.linspace(*UNIFORM_RANGE, points)
    lower_tail = np.geomspace(TAIL_RANGE[1], TAIL_RANGE[0], points)
    upper_tail = 1.0 - np.geomspace(TAIL_RANGE[1], TAIL_RANGE[0], points)
    return np.concatenate([uniform, lower_tail, upper_tail])


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("plot-irf", help="Tabulate an IRF and its derivative.")
    parser.add_argument("--family", default="normal-ogive", help="normal-ogive or 4pl.")
    parser.add_argument("--a", type=float, default=1.0)
    parser.add_argument("--b", type=float, default=1.0)
    parser.add_argument("--c", type=float, default=0.0)
    parser.add_argument("--d", type=float, default=1.0)
    parser.add_argument("--points", type=int, default=200, help="Points per grid.")
    add_common_arguments(parser)
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    manifest = start_manifest("plot-irf", args)
    params = ItemParams(family=args.family, a=args.a, b=args.b, c=args.c, d=args.d)
    irf = make_irf(params)
    theta = plot_grid(max(2, args.points))
    values = np.asarray(irf.eval(theta))
    slopes = np.asarray(irf.deriv(theta))
    rows = [(float(t), float(p), float(s)) for t, p, s in zip(theta, values, slopes)]
    emit_csv(format_csv(("theta", "p", "p_prime"), rows), manifest, args.out)
    return EXIT_OK
