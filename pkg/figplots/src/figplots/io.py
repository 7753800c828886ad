"""CSV loading with explicit schema checks."""

import csv
from pathlib import Path


class SchemaError(ValueError):
    """The CSV is missing required columns or carries no data rows."""


def load_columns(path, required):
    """Read a CSV into {column: list of raw strings}.

    Raises SchemaError when a required column is absent or the file has no
    data rows.  Extra columns are allowed and ignored.
    """
    path = Path(path)
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file, expected a header row") from None
        missing = [col for col in required if col not in header]
        if missing:
            raise SchemaError(f"{path}: missing columns {missing}, found {header}")
        rows = [row for row in reader if row]
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    out = {col: [] for col in required}
    for row in rows:
        if len(row) != len(header):
            raise SchemaError(f"{path}: ragged row {row!r}")
        for col in required:
            out[col].append(row[header.index(col)])
    return out


def floats(values, *, skip_empty=False):
    """Parse strings to floats; optionally drop empty fields (with indices)."""
    if not skip_empty:
        return [float(v) for v in values]
    kept = [(i, float(v)) for i, v in enumerate(values) if v != ""]
    return [i for i, _ in kept], [v for _, v in kept]
