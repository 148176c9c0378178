"""Model file and response matrix parsing, plus CSV/JSON output writers."""

from __future__ import annotations

import csv
import io
import json
import logging
import sys
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np
from pydantic import ValidationError

from .errors import DomainError, ModelValidationError
from .irf import ItemParams
from .manifest import ModelSpec
from .utils import format_float

logger = logging.getLogger(__name__)

MODEL_FIELDS = ("family", "a", "b", "c", "d")


def parse_model_line(line: str, item_index: int) -> ItemParams:
    """
    Parse `family a b [c d]`; normal-ogive lines may omit c and d.

    Raises:
        ModelValidationError: malformed line or invalid parameters, tagged with item_index.
    """
    tokens = line.split()
    if len(tokens) not in (3, 5):
        raise ModelValidationError(
            f"item {item_index}: expected 'family a b c d', got {line.strip()!r}",
            item_index=item_index,
        )
    try:
        values = dict(zip(MODEL_FIELDS, tokens))
        return ItemParams.model_validate(values)
    except (ValidationError, ValueError) as error:
        raise ModelValidationError(f"item {item_index}: {error}", item_index=item_index) from error


def parse_model_text(text: str) -> ModelSpec:
    params: list[ItemParams] = []
    for raw_line in text.splitlines():
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        params.append(parse_model_line(line, len(params)))
    if not params:
        raise ModelValidationError("model file lists no items")
    return ModelSpec.from_params(params)


def read_model_file(path: str | Path) -> ModelSpec:
    model = parse_model_text(Path(path).read_text(encoding="utf-8"))
    logger.info("loaded %d items from %s", model.n, path)
    return model


def format_model(params: Iterable[ItemParams]) -> str:
    lines = ["# family a b c d"]
    for item in params:
        values = (item.a, item.b, item.c, item.d)
        lines.append(" ".join([item.family.value, *(format_float(value) for value in values)]))
    return "\n".join(lines) + "\n"


def read_response_matrix(path: str | Path) -> np.ndarray:
    """Header-less CSV of 0/1, respondents as rows."""
    rows: list[list[int]] = []
    with open(path, newline="", encoding="utf-8") as handle:
        for line_number, row in enumerate(csv.reader(handle), start=1):
            cells = [cell.strip() for cell in row if cell.strip()]
            if not cells:
                continue
            if any(cell not in ("0", "1") for cell in cells):
                raise DomainError(f"{path}:{line_number}: responses must be 0 or 1")
            rows.append([int(cell) for cell in cells])
    if not rows:
        raise DomainError(f"{path}: response matrix is empty")
    widths = {len(row) for row in rows}
    if len(widths) != 1:
        raise DomainError(f"{path}: rows have differing lengths {sorted(widths)}")
    return np.asarray(rows, dtype=np.int8)


def format_response_matrix(responses: np.ndarray) -> str:
    return "".join(",".join(str(int(cell)) for cell in row) + "\n" for row in responses)


def format_csv(
    header: Sequence[str],
    rows: Iterable[Sequence[Any]],
    comments: Sequence[str] = (),
) -> str:
    """CSV with LF line endings and floats at 17 significant digits; comments trail the rows."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_float(cell) if isinstance(cell, float) else cell for cell in row])
    for comment in comments:
        buffer.write(f"# {comment}\n")
    return buffer.getvalue()


def format_json(payload: Any) -> str:
    return json.dumps(payload, indent=2, sort_keys=True, default=str) + "\n"


def write_output(text: str, path: str | Path | None) -> None:
    """Write to `path`, or stdout when path is None or '-'."""
    if path is None or str(path) == "-":
        sys.stdout.write(text)
        return
    Path(path).write_text(text, encoding="utf-8", newline="\n")
