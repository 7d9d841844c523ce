"""Attribute ingestion types and z-score standardization.

Every statistic downstream assumes variables with mean 0 and population
standard deviation 1, so standardization lives here as the single gate
between raw data and the rest of the package.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    InsufficientData,
    LengthMismatch,
    NonPositiveValue,
    ParseError,
    ZeroVariance,
)

# Post-standardization guarantees checked at construction time.
MEAN_TOL = 1e-12
STD_TOL = 1e-12


def _as_float_vector(values, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1:
        raise ParseError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        bad = int(np.flatnonzero(~np.isfinite(arr))[0])
        raise ParseError(f"{name} has a non-finite value at position {bad}")
    return arr


@dataclass(frozen=True)
class RawAttributeTable:
    """One explanatory and one response variable over n identified units.

    Parameters
    ----------
    ids : tuple of str
        Unit identifiers, unique, in file order. This order is the
        canonical unit order for every matrix built later.
    x_raw, y_raw : ndarray
        Raw attribute values aligned with ``ids``.
    """

    ids: tuple[str, ...]
    x_raw: np.ndarray
    y_raw: np.ndarray

    def __post_init__(self):
        ids = tuple(str(i) for i in self.ids)
        object.__setattr__(self, "ids", ids)
        x = _as_float_vector(self.x_raw, "x")
        y = _as_float_vector(self.y_raw, "y")
        if len(ids) != x.size or x.size != y.size:
            raise LengthMismatch(
                f"ids ({len(ids)}), x ({x.size}) and y ({y.size}) differ in length"
            )
        if len(set(ids)) != len(ids):
            seen = set()
            dup = next(i for i in ids if i in seen or seen.add(i))
            raise ParseError(f"duplicate id {dup!r} in attribute table")
        if x.size < 3:
            raise InsufficientData(f"need at least 3 units, got {x.size}")
        x.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "x_raw", x)
        object.__setattr__(self, "y_raw", y)

    @property
    def n(self) -> int:
        return len(self.ids)


@dataclass(frozen=True)
class StandardizedVector:
    """A z-scored variable: mean 0, population standard deviation 1.

    Construction re-checks both moments, so holding one of these is a
    proof that the quadratic-form statistics downstream are valid on it.
    """

    values: np.ndarray

    def __post_init__(self):
        v = _as_float_vector(self.values, "values")
        if v.size < 2:
            raise InsufficientData("a standardized vector needs at least 2 entries")
        mean = float(v.mean())
        if abs(mean) > MEAN_TOL:
            raise ZeroVariance(f"vector mean {mean:.3e} is not 0 within {MEAN_TOL}")
        pop_std = float(np.sqrt((v @ v) / v.size))
        if abs(pop_std - 1.0) > STD_TOL:
            raise ZeroVariance(
                f"population standard deviation {pop_std:.12f} is not 1 within {STD_TOL}"
            )
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return self.values.size

    def __len__(self) -> int:
        return self.values.size


def log_transform(raw) -> np.ndarray:
    """Natural log of a strictly positive vector.

    Raises
    ------
    NonPositiveValue
        If any entry is zero or negative.
    """
    arr = _as_float_vector(raw, "raw")
    if np.any(arr <= 0.0):
        bad = int(np.flatnonzero(arr <= 0.0)[0])
        raise NonPositiveValue(
            f"log transform needs strictly positive values; position {bad} is {arr[bad]!r}"
        )
    return np.log(arr)


def zscore(raw) -> StandardizedVector:
    """Standardize to mean 0 and population standard deviation 1.

    The mean is removed in two passes so that a large common offset
    (say, values near 1e9) cannot leave a residual mean big enough to
    fail the ``StandardizedVector`` gate.

    Raises
    ------
    ZeroVariance
        If the vector is constant.
    InsufficientData
        If there are fewer than 2 entries.
    """
    arr = _as_float_vector(raw, "raw")
    if arr.size < 2:
        raise InsufficientData("zscore needs at least 2 entries")
    d = arr - arr.mean()
    d -= d.mean()  # second pass kills the cancellation residue
    pop_std = float(np.sqrt((d @ d) / d.size))
    if pop_std == 0.0:
        raise ZeroVariance("constant vector cannot be standardized")
    return StandardizedVector(d / pop_std)
