"""Result bundles and deterministic CSV / JSON emission.

Identical configs produce byte-identical files: numbers are written with a
fixed precision, and nothing volatile (timestamps, wall time) goes into the
payload or metadata.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class Table:
    """One rectangular payload table."""

    slug: str
    columns: list[str]
    rows: np.ndarray  # (nrows, ncols) float

    def __post_init__(self):
        rows = np.atleast_2d(np.asarray(self.rows, dtype=float))
        if rows.shape[1] != len(self.columns):
            raise ValueError(
                f"table {self.slug!r}: {rows.shape[1]} columns of data "
                f"for {len(self.columns)} headers"
            )
        object.__setattr__(self, "rows", rows)


@dataclass
class ResultBundle:
    """Metadata plus one or more payload tables."""

    metadata: dict
    tables: list[Table] = field(default_factory=list)

    def table(self, slug: str) -> Table:
        for t in self.tables:
            if t.slug == slug:
                return t
        raise KeyError(slug)


def _format_value(x: float, precision: int) -> str:
    if x == int(x) and abs(x) < 1e15:
        return str(int(x))
    return format(x, f".{precision}g")


def _csv_paths(path: str, tables: list[Table]) -> list[str]:
    if len(tables) == 1:
        return [path]
    stem, ext = os.path.splitext(path)
    return [path if i == 0 else f"{stem}.{t.slug}{ext or '.csv'}"
            for i, t in enumerate(tables)]


def write_csv(bundle: ResultBundle, precision: int) -> list[str]:
    """One CSV file per table; extra tables get the table slug in their name."""
    paths = _csv_paths(bundle.metadata["output_path"], bundle.tables)
    for table, path in zip(bundle.tables, paths):
        parent = os.path.dirname(path)
        if parent:
            os.makedirs(parent, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(",".join(table.columns) + "\n")
            for row in table.rows:
                fh.write(",".join(_format_value(x, precision) for x in row) + "\n")
    return paths


def write_json(bundle: ResultBundle) -> list[str]:
    """Single JSON file: {"metadata": ..., "payload": {slug: {columns, rows}}}.

    Floats are emitted with Python's shortest round-trip representation, so
    reading the file back reproduces every double bit-for-bit.
    """
    path = bundle.metadata["output_path"]
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    payload = {
        t.slug: {"columns": t.columns, "rows": [[float(x) for x in row] for row in t.rows]}
        for t in bundle.tables
    }
    doc = {
        "metadata": {k: v for k, v in bundle.metadata.items() if k != "output_path"},
        "payload": payload,
    }
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(doc, fh, sort_keys=True, indent=1)
        fh.write("\n")
    return [path]


def write_bundle(bundle: ResultBundle, fmt: str, precision: int) -> list[str]:
    if fmt == "json":
        return write_json(bundle)
    return write_csv(bundle, precision)
