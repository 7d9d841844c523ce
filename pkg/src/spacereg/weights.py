"""Spatial and temporal weight matrices.

The spatial construction is inverse-distance contiguity with *global*
normalization: every off-diagonal cell of the contiguity matrix is divided
by the grand total, so the finished matrix sums to 1 over all cells rather
than to 1 per row. Global normalization keeps the matrix symmetric, which
the quadratic-form statistics rely on.

The temporal construction treats a series of length n as n units on a
line: units i and j are contiguous iff |i - j| equals the lag, and the
band matrix is scaled by 1/(2n). Its cells sum to (n - lag)/n, not 1;
that shortfall is what makes the lag statistic match the textbook
autocorrelation coefficient.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    AsymmetricDistance,
    DimensionMismatch,
    LagOutOfRange,
    NonPositiveDistance,
    ZeroMatrix,
)

# Relative tolerance used when checking a distance matrix against its
# transpose, and absolute tolerance on the grand total of W.
SYMMETRY_RTOL = 1e-6
TOTAL_TOL = 1e-12


def _square(matrix, name: str) -> np.ndarray:
    arr = np.asarray(matrix, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionMismatch(f"{name} must be square, got shape {arr.shape}")
    if arr.shape[0] < 2:
        raise DimensionMismatch(f"{name} needs at least 2 units, got {arr.shape[0]}")
    if not np.all(np.isfinite(arr)):
        raise DimensionMismatch(f"{name} has non-finite entries")
    return arr


@dataclass(frozen=True)
class DistanceMatrix:
    """Pairwise distances r_ij between n units.

    The diagonal is ignored (stored as 0). Off-diagonal entries must be
    strictly positive, and the matrix must agree with its transpose to a
    relative tolerance of 1e-6; it is then symmetrized exactly by
    averaging with its transpose.

    Parameters
    ----------
    r : ndarray of shape (n, n)
        Distances. Only off-diagonal cells are meaningful.
    ids : tuple of str, optional
        Unit identifiers in row order, when known.
    """

    r: np.ndarray
    ids: tuple[str, ...] | None = None

    def __post_init__(self):
        arr = _square(self.r, "distance matrix")
        n = arr.shape[0]
        off = ~np.eye(n, dtype=bool)
        if np.any(arr[off] <= 0.0):
            i, j = map(int, np.argwhere(off & (arr <= 0.0))[0])
            raise NonPositiveDistance(
                f"distance ({i},{j}) is {arr[i, j]!r}; distinct units must have positive distance"
            )
        gap = np.abs(arr - arr.T)
        scale = np.maximum(np.abs(arr), np.abs(arr.T))
        if np.any(gap[off] > SYMMETRY_RTOL * scale[off]):
            i, j = map(int, np.argwhere(off & (gap > SYMMETRY_RTOL * scale))[0])
            raise AsymmetricDistance(
                f"distance ({i},{j})={arr[i, j]!r} disagrees with ({j},{i})={arr[j, i]!r}"
            )
        sym = (arr + arr.T) / 2.0
        np.fill_diagonal(sym, 0.0)
        sym.setflags(write=False)
        object.__setattr__(self, "r", sym)
        if self.ids is not None:
            ids = tuple(str(i) for i in self.ids)
            if len(ids) != n:
                raise DimensionMismatch(
                    f"{len(ids)} ids for a {n}x{n} distance matrix"
                )
            object.__setattr__(self, "ids", ids)

    @property
    def n(self) -> int:
        return self.r.shape[0]


@dataclass(frozen=True)
class ContiguityMatrix:
    """Unnormalized contiguity values: symmetric, nonnegative, zero diagonal."""

    v: np.ndarray

    def __post_init__(self):
        arr = _square(self.v, "contiguity matrix")
        if np.any(arr < 0.0):
            raise NonPositiveDistance("contiguity values must be nonnegative")
        if not np.array_equal(arr, arr.T):
            raise AsymmetricDistance("contiguity matrix must be exactly symmetric")
        if np.any(np.diagonal(arr) != 0.0):
            raise DimensionMismatch("contiguity matrix must have a zero diagonal")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "v", arr)

    @property
    def n(self) -> int:
        return self.v.shape[0]


@dataclass(frozen=True)
class SpatialWeightMatrix:
    """Globally normalized weights: symmetric, zero diagonal, cells sum to 1."""

    w: np.ndarray

    def __post_init__(self):
        arr = _square(self.w, "weight matrix")
        if np.any(arr < 0.0):
            raise NonPositiveDistance("weights must be nonnegative")
        if not np.array_equal(arr, arr.T):
            raise AsymmetricDistance("weight matrix must be exactly symmetric")
        if np.any(np.diagonal(arr) != 0.0):
            raise DimensionMismatch("weight matrix must have a zero diagonal")
        total = float(arr.sum())
        if abs(total - 1.0) > TOTAL_TOL:
            raise ZeroMatrix(f"weight cells sum to {total!r}, expected 1")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "w", arr)

    @property
    def n(self) -> int:
        return self.w.shape[0]


@dataclass(frozen=True)
class TemporalWeightMatrix:
    """Lag-band temporal weights w = v / (2n); cells sum to (n - lag)/n."""

    w: np.ndarray
    lag: int

    def __post_init__(self):
        arr = _square(self.w, "temporal weight matrix")
        n = arr.shape[0]
        if not 1 <= self.lag <= n - 1:
            raise LagOutOfRange(f"lag {self.lag} outside 1..{n - 1}")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "w", arr)

    @property
    def n(self) -> int:
        return self.w.shape[0]


def inverse_distance_contiguity(d: DistanceMatrix) -> ContiguityMatrix:
    """Contiguity v_ij = 1 / r_ij off the diagonal, 0 on it.

    Parameters
    ----------
    d : DistanceMatrix

    Returns
    -------
    ContiguityMatrix
        Symmetric with strictly positive off-diagonal cells.
    """
    n = d.n
    v = np.zeros((n, n))
    off = ~np.eye(n, dtype=bool)
    v[off] = 1.0 / d.r[off]
    return ContiguityMatrix(v)


def normalize_global(v: ContiguityMatrix) -> SpatialWeightMatrix:
    """Divide every cell by the grand total so the matrix sums to 1.

    Raises
    ------
    ZeroMatrix
        If the contiguity matrix has no nonzero cell.

    Examples
    --------
    >>> normalize_global(ContiguityMatrix([[0.0, 3.0], [3.0, 0.0]])).w
    array([[0. , 0.5],
           [0.5, 0. ]])
    """
    total = float(v.v.sum())
    if total == 0.0:
        raise ZeroMatrix("contiguity matrix sums to 0; nothing to normalize")
    return SpatialWeightMatrix(v.v / total)


def temporal_contiguity(n: int, tau: int) -> ContiguityMatrix:
    """Band contiguity for a length-n series: v_ij = 1 iff |i - j| = tau.

    Raises
    ------
    LagOutOfRange
        Unless 1 <= tau <= n - 1.
    """
    if not 1 <= tau <= n - 1:
        raise LagOutOfRange(f"lag {tau} outside 1..{n - 1}")
    idx = np.arange(n)
    v = (np.abs(idx[:, None] - idx[None, :]) == tau).astype(float)
    return ContiguityMatrix(v)


def temporal_weights(v: ContiguityMatrix, lag: int) -> TemporalWeightMatrix:
    """Scale a temporal contiguity band by 1/(2n).

    The deliberate result is a matrix whose cells sum to (n - lag)/n
    rather than 1: with that scaling the quadratic form z'Wz equals the
    ordinary lag-``lag`` autocorrelation coefficient of z.
    """
    n = v.n
    return TemporalWeightMatrix(v.v / (2.0 * n), lag)
