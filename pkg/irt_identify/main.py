"""Command-line entry point for the identifiability laboratory."""

from __future__ import annotations

import argparse
import logging
import sys
from typing import Sequence

from pydantic import ValidationError

from . import __version__
from .commands import COMMAND_MODULES
from .commands.shared import EXIT_CHECK_FAILED, EXIT_USAGE
from .config import LOG_LEVEL, VALID_LOG_LEVELS
from .errors import (
    DegenerateDataError,
    DomainError,
    EmptyRecoveryGridError,
    EnumerationLimitError,
    IdentifyError,
    ModelValidationError,
)

logger = logging.getLogger("irt_identify")

USAGE_ERRORS = (DomainError, ModelValidationError, EnumerationLimitError, ValidationError, ValueError, OSError)


def configure_logging(level: str) -> None:
    """Send library logs to stderr so stdout carries only command output."""
    logging.basicConfig(
        level=getattr(logging, level, logging.WARNING),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="irt-identify",
        description="Numerical checks of asymptotic identifiability for nonparametric item response models.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "--log-level",
        type=str.upper,
        choices=sorted(VALID_LOG_LEVELS),
        default=None,
        help="Override IRT_IDENTIFY_LOG_LEVEL.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    for module in COMMAND_MODULES:
        module.register(subparsers)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.log_level or LOG_LEVEL)

    try:
        return args.handler(args)
    except EmptyRecoveryGridError as error:
        print(f"error: recovery grid empty: {error}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    except ModelValidationError as error:
        location = "" if error.item_index is None else f" (item {error.item_index + 1})"
        print(f"error: model validation failed{location}: {error}", file=sys.stderr)
        return EXIT_USAGE
    except DegenerateDataError as error:
        print(f"error: {error}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    except USAGE_ERRORS as error:
        print(f"error: {error}", file=sys.stderr)
        return EXIT_USAGE
    except IdentifyError as error:
        logger.exception("command %s failed", args.command)
        print(f"error: {error}", file=sys.stderr)
        return EXIT_CHECK_FAILED


if __name__ == "__main__":
    sys.exit(main())
