"""Tabular measurement data: rows are variables, columns are data points.

The on-disk interchange format is a headerless CSV where each column holds
one data point and each row one variable.  By convention the first
``n_outputs`` rows are output variables (row 1 = first output, the next row
= first feature).  The accompanying text of the original data layout labels
row 1 "the input function"; context makes clear it is the output, and this
module treats it as such.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np


class DatasetError(Exception):
    """Raised for malformed dataset files (ragged rows, bad cells, empty input)."""


@dataclass(frozen=True)
class Dataset:
    """Immutable matrix of measurements, shape (n_outputs + n_features, n_points)."""

    values: np.ndarray
    n_outputs: int

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        if values.ndim != 2:
            raise ValueError("values must be a 2-d matrix")
        if values.shape[1] < 1:
            raise ValueError("dataset needs at least one data point")
        if not (0 <= self.n_outputs < values.shape[0]):
            raise ValueError(
                f"n_outputs={self.n_outputs} leaves no feature rows "
                f"(dataset has {values.shape[0]} rows)"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("dataset contains non-finite entries")

    @property
    def n_rows(self) -> int:
        return self.values.shape[0]

    @property
    def n_features(self) -> int:
        return self.n_rows - self.n_outputs

    @property
    def n_points(self) -> int:
        return self.values.shape[1]

    def row(self, variable_id: int) -> np.ndarray:
        """Values of a variable by its 1-based row index."""
        if not 1 <= variable_id <= self.n_rows:
            raise ValueError(f"variable id {variable_id} out of range 1..{self.n_rows}")
        return self.values[variable_id - 1]

    @property
    def output_ids(self) -> range:
        return range(1, self.n_outputs + 1)

    @property
    def feature_ids(self) -> range:
        return range(self.n_outputs + 1, self.n_rows + 1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Dataset):
            return NotImplemented
        return self.n_outputs == other.n_outputs and np.array_equal(
            self.values, other.values
        )


def load_csv(path, n_outputs: int = 1) -> Dataset:
    """Read a dataset from the headerless variables-by-points CSV layout.

    Cells are parsed as 64-bit floats.  Rejects ragged rows, non-numeric or
    non-finite cells and empty files.
    """
    rows: list[list[float]] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        for row_no, record in enumerate(reader, start=1):
            if rows and len(record) != len(rows[0]):
                raise DatasetError(
                    f"row {row_no} has {len(record)} columns, expected {len(rows[0])}"
                )
            parsed = []
            for col_no, cell in enumerate(record, start=1):
                try:
                    value = float(cell)
                except ValueError:
                    raise DatasetError(
                        f"non-numeric cell {cell!r} at row {row_no}, column {col_no}"
                    ) from None
                if not np.isfinite(value):
                    raise DatasetError(
                        f"non-finite cell {cell!r} at row {row_no}, column {col_no}"
                    )
                parsed.append(value)
            rows.append(parsed)
    if not rows or not rows[0]:
        raise DatasetError(f"empty dataset file: {path}")
    return Dataset(np.array(rows, dtype=np.float64), n_outputs)


def save_csv(ds: Dataset, path) -> None:
    """Write a dataset in the interchange CSV layout; round-trips bit-exactly."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        for row in ds.values:
            fh.write(",".join(repr(float(v)) for v in row))
            fh.write("\n")


def subsample(ds: Dataset, fraction: float, seed: int) -> Dataset:
    """Uniform random subset of round(fraction * n_points) columns.

    Deterministic in (ds, fraction, seed); kept columns preserve their
    original relative order and are never duplicated.
    """
    if not 0.0 < fraction <= 1.0:
        raise ValueError(f"fraction must be in (0, 1], got {fraction}")
    size = int(round(fraction * ds.n_points))
    if size < 1:
        raise ValueError(
            f"fraction {fraction} of {ds.n_points} points selects no columns"
        )
    rng = np.random.default_rng(seed)
    keep = np.sort(rng.choice(ds.n_points, size=size, replace=False))
    return Dataset(ds.values[:, keep], ds.n_outputs)
