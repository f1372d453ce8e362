"""Readers for the parityq CLI artifact formats.

CSV files carry ``#``-prefixed header metadata (schema-version, units, job
description, column list) followed by comma-separated rows; JSON reports
carry a ``schema_version`` field.  Columns may be numeric or categorical
(e.g. parity labels) -- numeric conversion is attempted per column.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

SUPPORTED_SCHEMA = "1"


class DatasetError(ValueError):
    """Artifact missing, empty, or not in a supported schema."""


@dataclass
class Dataset:
    """Parsed CSV artifact: header metadata plus named columns."""

    path: str
    header: list
    columns: list
    data: dict  # column name -> np.ndarray (float64 or object)

    @property
    def n_rows(self) -> int:
        return len(self.data[self.columns[0]]) if self.columns else 0

    def numeric(self, name: str) -> np.ndarray:
        """Column as float array; raises DatasetError listing alternatives."""
        if name not in self.data:
            raise DatasetError(
                f"column {name!r} not in {self.path}; available: "
                + ", ".join(self.columns)
            )
        col = self.data[name]
        if col.dtype == object:
            raise DatasetError(f"column {name!r} in {self.path} is not numeric")
        return col


def load_csv(path: str) -> Dataset:
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise DatasetError(f"cannot read dataset {path}: {exc}") from None
    header = [ln[2:].strip() for ln in lines if ln.startswith("#")]
    rows = [ln for ln in lines if ln and not ln.startswith("#")]
    if not header or not header[0].startswith("parityq csv schema-version"):
        raise DatasetError(f"{path} is not a parityq CSV artifact")
    version = header[0].rsplit(" ", 1)[-1]
    if version != SUPPORTED_SCHEMA:
        raise DatasetError(f"{path}: unsupported schema-version {version}")
    columns_line = next((h for h in header if h.startswith("columns:")), None)
    if columns_line is None:
        raise DatasetError(f"{path}: no columns header")
    columns = [c.strip() for c in columns_line.split(":", 1)[1].split(",")]
    if not rows:
        raise DatasetError(f"{path}: dataset has no data rows")
    cells = [r.split(",") for r in rows]
    if any(len(c) != len(columns) for c in cells):
        raise DatasetError(f"{path}: ragged rows vs {len(columns)} columns")
    data = {}
    for j, name in enumerate(columns):
        raw = [c[j] for c in cells]
        try:
            data[name] = np.array([float(v) for v in raw])
        except ValueError:
            data[name] = np.array(raw, dtype=object)
    return Dataset(path=path, header=header, columns=columns, data=data)


def load_json(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            report = json.load(fh)
    except OSError as exc:
        raise DatasetError(f"cannot read dataset {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise DatasetError(f"{path}: invalid JSON: {exc}") from None
    if report.get("schema_version") != SUPPORTED_SCHEMA:
        raise DatasetError(f"{path}: unsupported schema_version")
    return report
