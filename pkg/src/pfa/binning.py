"""Occupancy-driven discretization of continuous variables.

Each variable's values are walked in ascending order; a bin is closed once
it holds at least ``nu`` points and the next unassigned value is strictly
greater than the bin's last value, so equal values never split across bins.
A trailing remainder of fewer than ``nu`` points is merged into the
preceding full bin.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import Dataset


@dataclass(frozen=True)
class DiscretizedFeature:
    """Per-point ordinal bin indices for one variable.

    ``is_constant`` marks variables whose measurements show a single value.
    A variable that ends up with a single bin for any reason (constant, or
    too few points to ever fill a bin) carries no contingency information
    and is excluded from independence testing.
    """

    bin_of_point: np.ndarray
    n_bins: int
    is_constant: bool

    def __post_init__(self):
        bins = np.asarray(self.bin_of_point, dtype=np.int64)
        bins.setflags(write=False)
        object.__setattr__(self, "bin_of_point", bins)

    @property
    def n_points(self) -> int:
        return len(self.bin_of_point)

    @property
    def testable(self) -> bool:
        return self.n_bins > 1


def discretize(values, nu: int) -> DiscretizedFeature:
    """Bin one variable's values so every bin holds >= nu points.

    Ties in the value order are broken by original point index (stable
    sort); the resulting partition depends only on the values.
    """
    values = np.asarray(values, dtype=np.float64)
    if values.size == 0:
        raise ValueError("cannot discretize an empty value sequence")
    if nu < 1:
        raise ValueError(f"nu must be >= 1, got {nu}")

    if values.max() <= values.min():
        return DiscretizedFeature(np.zeros(values.size, dtype=np.int64), 1, True)

    order = np.argsort(values, kind="stable")
    ordered = values[order]
    n = values.size

    boundaries = []  # exclusive end position of each closed bin
    i = 0
    while i < n:
        if n - i < nu:
            # trailing remainder: merge into the last full bin
            if boundaries:
                boundaries[-1] = n
            else:
                boundaries.append(n)
            break
        end = i + nu
        # extend across ties so equal values stay in one bin
        while end < n and ordered[end] == ordered[end - 1]:
            end += 1
        boundaries.append(end)
        i = end

    bin_in_order = np.empty(n, dtype=np.int64)
    start = 0
    for b, end in enumerate(boundaries):
        bin_in_order[start:end] = b
        start = end

    bin_of_point = np.empty(n, dtype=np.int64)
    bin_of_point[order] = bin_in_order
    return DiscretizedFeature(bin_of_point, len(boundaries), False)


def discretize_all(ds: Dataset, nu: int) -> list[DiscretizedFeature]:
    """Discretize every row of a dataset (outputs included), in row order."""
    result = []
    for row_index in range(ds.n_rows):
        try:
            result.append(discretize(ds.values[row_index], nu))
        except ValueError as exc:
            raise ValueError(f"row {row_index + 1}: {exc}") from exc
    return result
