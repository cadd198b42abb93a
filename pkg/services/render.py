"""Deterministic JSON, CSV and text renderings of command results."""

import csv
import io
import json
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field

FORMATS = ("json", "csv", "text")


class CommandResult(BaseModel):
    """A payload for JSON plus an optional flat table for CSV and text."""

    payload: Dict[str, Any]
    columns: List[str] = Field(default_factory=list)
    rows: List[List[Any]] = Field(default_factory=list)
    summary: List[str] = Field(default_factory=list)


def to_json(payload: Any) -> str:
    # insertion order is the contract; never sort
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


def to_csv(result: CommandResult) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    if result.columns:
        writer.writerow(result.columns)
        writer.writerows(result.rows)
    else:
        for key, value in result.payload.items():
            writer.writerow([key, _cell(value)])
    return buffer.getvalue()


def to_text(result: CommandResult) -> str:
    lines = list(result.summary)
    if result.columns:
        cells = [[str(c) for c in result.columns]]
        cells += [[_cell(v) for v in row] for row in result.rows]
        widths = [max(len(row[i]) for row in cells) for i in range(len(result.columns))]
        for index, row in enumerate(cells):
            lines.append("  ".join(cell.ljust(width) for cell, width in zip(row, widths)).rstrip())
            if index == 0:
                lines.append("  ".join("-" * width for width in widths))
    elif not lines:
        lines = [f"{key}: {_cell(value)}" for key, value in result.payload.items()]
    return "\n".join(lines) + "\n"


def render(result: CommandResult, fmt: str = "json") -> str:
    """
    Render a result.

    Args:
        result: Command result
        fmt: json, csv or text

    Returns:
        The rendered document, newline-terminated
    """
    if fmt == "json":
        return to_json(result.payload)
    if fmt == "csv":
        return to_csv(result)
    if fmt == "text":
        return to_text(result)
    raise ValueError(f"unknown format: {fmt}")


def _cell(value: Any) -> str:
    if isinstance(value, (dict, list)):
        return json.dumps(value, ensure_ascii=False, separators=(",", ":"))
    return str(value)


def cyclo_cell(value: Any, approx: Optional[bool] = False) -> str:
    """Exact string of a cyclotomic number, optionally with its complex value."""
    if approx:
        z = value.to_complex()
        real, imag = (round(part, 12) + 0.0 for part in (z.real, z.imag))
        return f"{value} (~{real:.6g}{imag:+.6g}i)"
    return str(value)
