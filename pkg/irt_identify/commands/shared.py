"""Helpers shared by the CLI commands: run manifests, model sources, output."""

from __future__ import annotations

import argparse
import logging
from datetime import datetime
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path
from typing import Any

from pydantic import BaseModel

from .. import __version__
from ..config import DEFAULT_SEED
from ..errors import DomainError
from ..experiments import resolve_preset
from ..files import format_json, read_model_file, write_output
from ..manifest import ModelSpec
from ..utils import config_digest, now_utc

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2


class RunManifest(BaseModel):
    """Provenance record emitted alongside every command output."""

    command: str
    config_digest: str
    seed: int
    tool_version: str
    started_at: datetime
    finished_at: datetime | None = None
    config: dict[str, Any]


def tool_version() -> str:
    try:
        return version("irt-identify")
    except PackageNotFoundError:
        return __version__


def command_config(args: argparse.Namespace) -> dict[str, Any]:
    """Resolved arguments of a command, minus process-level plumbing."""
    skipped = {"handler", "log_level", "out", "format", "model_out"}
    return {key: value for key, value in sorted(vars(args).items()) if key not in skipped}


def start_manifest(command: str, args: argparse.Namespace) -> RunManifest:
    config = command_config(args)
    return RunManifest(
        command=command,
        config_digest=config_digest(config),
        seed=int(getattr(args, "seed", DEFAULT_SEED)),
        tool_version=tool_version(),
        started_at=now_utc(),
        config=config,
    )


def finish_manifest(manifest: RunManifest) -> RunManifest:
    return manifest.model_copy(update={"finished_at": now_utc()})


def load_model(args: argparse.Namespace) -> ModelSpec:
    """Model from --model, else from --preset sized by --n-items."""
    if getattr(args, "model", None):
        return read_model_file(args.model)
    preset = getattr(args, "preset", None)
    n_items = getattr(args, "n_items", None)
    if preset and n_items:
        return resolve_preset(preset, args.seed)(n_items)
    raise DomainError("provide --model, or --preset together with --n-items")


def item_index(args: argparse.Namespace, model_size: int) -> int:
    """Convert the 1-based --item flag to a library index."""
    if not 1 <= args.item <= model_size:
        raise DomainError(f"--item must lie in 1..{model_size}, got {args.item}")
    return args.item - 1


def emit_json(payload: dict[str, Any], manifest: RunManifest, out: str | None) -> None:
    body = dict(payload)
    body["manifest"] = finish_manifest(manifest).model_dump(mode="json")
    write_output(format_json(body), out)


def emit_csv(text: str, manifest: RunManifest, out: str | None) -> None:
    """CSV goes to --out; the manifest goes next to it, or to the log for stdout."""
    write_output(text, out)
    record = format_json(finish_manifest(manifest).model_dump(mode="json"))
    if out and out != "-":
        Path(f"{out}.manifest.json").write_text(record, encoding="utf-8", newline="\n")
    else:
        logger.info("run manifest: %s", record.strip())


def add_common_arguments(parser: argparse.ArgumentParser, formats: tuple[str, ...] = ("csv",)) -> None:
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED, help="Seed for presets and simulation.")
    parser.add_argument("--out", default=None, help="Output path (default: stdout).")
    parser.add_argument("--format", choices=formats, default=formats[0], help="Output format.")


def add_interval_arguments(parser: argparse.ArgumentParser, alpha: float, beta: float) -> None:
    parser.add_argument("--alpha", type=float, default=alpha, help="Left end of the trait interval.")
    parser.add_argument("--beta", type=float, default=beta, help="Right end of the trait interval.")
