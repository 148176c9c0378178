"""CLI subcommands; each module registers one subparser."""

from . import bounds, check, converge, plot_irf, recover, simulate

COMMAND_MODULES = (plot_irf, check, recover, converge, bounds, simulate)

__all__ = ["COMMAND_MODULES"]
