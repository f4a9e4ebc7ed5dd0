"""CSV schema validation for the documented vise output formats."""

from __future__ import annotations

import csv

import numpy as np

__all__ = ["SchemaError", "read_columns", "read_mask"]


class SchemaError(Exception):
    """An input file does not match its documented header or is empty."""


def read_columns(path: str, required: tuple[str, ...]) -> dict[str, np.ndarray]:
    """Read a CSV into float arrays, requiring the named columns.

    Raises SchemaError naming the first missing column, or on an empty /
    headerless file.  Non-numeric cells (e.g. the ``case`` and ``flag``
    text columns) are skipped unless required, in which case they are
    returned as object arrays.
    """
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: file is empty (no header row)") from None
        rows = list(reader)

    for column in required:
        if column not in header:
            raise SchemaError(f"{path}: missing required column {column!r} (got {header})")
    if not rows:
        raise SchemaError(f"{path}: no data rows")

    out: dict[str, np.ndarray] = {}
    for column in required:
        idx = header.index(column)
        values = [row[idx] for row in rows]
        try:
            out[column] = np.array([float(v) for v in values])
        except ValueError:
            out[column] = np.array(values, dtype=object)
    return out


def read_mask(path: str) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Read a pit-mask CSV: (mu_over_sigma, delta, mask[i, j]).

    The documented header is ``mu_over_sigma`` followed by one
    ``delta=<value>`` column per egoist share.
    """
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: file is empty (no header row)") from None
        rows = list(reader)

    if not header or header[0] != "mu_over_sigma":
        raise SchemaError(f"{path}: missing required column 'mu_over_sigma' (got {header[:1]})")
    delta_cols = [c for c in header[1:] if c.startswith("delta=")]
    if not delta_cols or len(delta_cols) != len(header) - 1:
        raise SchemaError(f"{path}: expected 'delta=<value>' columns, got {header[1:]}")
    if not rows:
        raise SchemaError(f"{path}: no data rows")

    try:
        mu = np.array([float(r[0]) for r in rows])
        mask = np.array([[int(v) for v in r[1:]] for r in rows], dtype=int)
        deltas = np.array([float(c.split("=", 1)[1]) for c in delta_cols])
    except (ValueError, IndexError) as exc:
        raise SchemaError(f"{path}: malformed mask cell ({exc})") from None
    if mask.shape != (len(mu), len(deltas)):
        raise SchemaError(f"{path}: ragged mask ({mask.shape} vs {len(mu)}x{len(deltas)})")
    return mu, deltas, mask
