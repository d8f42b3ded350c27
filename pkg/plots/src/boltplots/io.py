"""Strict readers for the CLI's serialized artifacts.

CSV files start with ``# key=value`` comment lines (notably
``config_hash``) followed by a header row; all data columns are numeric.
Readers fail fast on missing columns or empty series -- figures never
patch over malformed inputs.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

__all__ = ["InputError", "Table", "read_table", "read_json", "json_get"]


class InputError(ValueError):
    """A required input file, column, or key is missing or empty."""


class Table:
    """Columns of one artifact CSV plus its comment metadata."""

    def __init__(self, path: str, columns: dict[str, np.ndarray],
                 meta: dict[str, str]):
        self.path = path
        self.columns = columns
        self.meta = meta

    def require(self, *names: str) -> tuple[np.ndarray, ...]:
        missing = [n for n in names if n not in self.columns]
        if missing:
            raise InputError(
                f"{self.path}: missing column(s) {', '.join(missing)} "
                f"(have: {', '.join(self.columns) or 'none'})")
        return tuple(self.columns[n] for n in names)


def read_table(path: str) -> Table:
    p = Path(path)
    if not p.is_file():
        raise InputError(f"{path}: no such file")
    meta: dict[str, str] = {}
    with p.open(newline="") as fh:
        rows = []
        header: list[str] | None = None
        for row in csv.reader(fh):
            if not row:
                continue
            if row[0].lstrip().startswith("#"):
                text = ",".join(row).lstrip("# ").strip()
                if "=" in text:
                    k, v = text.split("=", 1)
                    meta[k.strip()] = v.strip()
                continue
            if header is None:
                header = [c.strip() for c in row]
            else:
                rows.append(row)
    if header is None:
        raise InputError(f"{path}: no header row")
    if not rows:
        raise InputError(f"{path}: empty series")
    try:
        data = np.array(rows, dtype=float)
    except ValueError as exc:
        raise InputError(f"{path}: non-numeric data ({exc})") from exc
    if data.shape[1] != len(header):
        raise InputError(f"{path}: ragged rows")
    columns = {name: data[:, i] for i, name in enumerate(header)}
    return Table(path, columns, meta)


def read_json(path: str) -> dict:
    p = Path(path)
    if not p.is_file():
        raise InputError(f"{path}: no such file")
    try:
        doc = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(doc, dict):
        raise InputError(f"{path}: expected a JSON object")
    return doc


def json_get(doc: dict, path: str, *keys: str):
    """Fetch doc[k1][k2]... with a readable error on absence."""
    node = doc
    for k in keys:
        if not isinstance(node, dict) or k not in node:
            raise InputError(f"{path}: missing key {'.'.join(keys)}")
        node = node[k]
    return node
