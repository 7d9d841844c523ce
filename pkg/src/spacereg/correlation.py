"""Correlation statistics as quadratic and bilinear forms.

With variables standardized to mean 0 and population standard deviation 1
(so zᵀz = n), every statistic here is a matrix sandwich:

    Pearson            R     = (1/n) xᵀy
    spatial auto       I_x   = xᵀWx
    spatial cross      I_xy  = xᵀWy
    temporal auto      rho_t = xᵀW_t x

where W is a globally normalized symmetric spatial weight matrix and W_t
the lag-band temporal matrix. Significance mirrors the one-variable
regression procedure: regress n·(Wz2) on z1; the slope reproduces the
index and carries an ordinary t test. A permutation test is included as
a distribution-free cross-check.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .data import StandardizedVector, zscore
from .errors import (
    DegenerateRegression,
    DimensionMismatch,
    InsufficientData,
    LengthMismatch,
)
from .weights import (
    ContiguityMatrix,
    SpatialWeightMatrix,
    TemporalWeightMatrix,
    temporal_contiguity,
    temporal_weights,
)

METHOD_REGRESSION = "regression_t"
METHOD_PERMUTATION = "permutation"


@dataclass(frozen=True)
class SpatialCorrelationMatrix:
    """The four entries of C = XᵀWX for X = [x y].

    i_xy and i_yx are computed independently; symmetry of W makes them
    agree to rounding, and construction enforces that.
    """

    i_x: float
    i_xy: float
    i_yx: float
    i_y: float

    def __post_init__(self):
        if abs(self.i_xy - self.i_yx) > 1e-12:
            raise DimensionMismatch(
                f"cross terms disagree: {self.i_xy!r} vs {self.i_yx!r}; weight matrix not symmetric?"
            )


@dataclass(frozen=True)
class CorrelationTest:
    """A correlation index with its significance assessment."""

    statistic: float
    slope_se: float
    t_value: float
    p_value: float
    method: str

    def __post_init__(self):
        if self.method not in (METHOD_REGRESSION, METHOD_PERMUTATION):
            raise ValueError(f"unknown method {self.method!r}")
        if not 0.0 <= self.p_value <= 1.0:
            raise ValueError(f"p-value {self.p_value!r} outside [0, 1]")


def _vector(z) -> np.ndarray:
    if isinstance(z, StandardizedVector):
        return z.values
    return np.asarray(z, dtype=float)


def _weight_array(w, n: int) -> np.ndarray:
    """Accept a weight wrapper or a bare square array of matching size."""
    if isinstance(w, (SpatialWeightMatrix, TemporalWeightMatrix)):
        arr = w.w
    elif isinstance(w, ContiguityMatrix):
        arr = w.v
    else:
        arr = np.asarray(w, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionMismatch(f"weight matrix must be square, got shape {arr.shape}")
    if arr.shape[0] != n:
        raise DimensionMismatch(f"weight matrix is {arr.shape[0]}x{arr.shape[0]}, data has n={n}")
    return arr


def pearson_r(x: StandardizedVector, y: StandardizedVector) -> float:
    """Pearson correlation of two standardized vectors, (1/n) xᵀy."""
    xv, yv = _vector(x), _vector(y)
    if xv.size != yv.size:
        raise LengthMismatch(f"lengths differ: {xv.size} vs {yv.size}")
    return float(xv @ yv) / xv.size


def pearson_matrix(x: StandardizedVector, y: StandardizedVector) -> np.ndarray:
    """2x2 correlation matrix (1/n) XᵀX; diagonal is computed, not assumed."""
    xv, yv = _vector(x), _vector(y)
    if xv.size != yv.size:
        raise LengthMismatch(f"lengths differ: {xv.size} vs {yv.size}")
    n = xv.size
    r = float(xv @ yv) / n
    return np.array([[float(xv @ xv) / n, r], [r, float(yv @ yv) / n]])


def morans_index(z: StandardizedVector, w) -> float:
    """Spatial autocorrelation zᵀWz under global normalization."""
    zv = _vector(z)
    arr = _weight_array(w, zv.size)
    return float(zv @ (arr @ zv))


def cross_correlation(x: StandardizedVector, y: StandardizedVector, w) -> float:
    """Spatial cross-correlation xᵀWy; symmetric in x and y for symmetric W."""
    xv, yv = _vector(x), _vector(y)
    if xv.size != yv.size:
        raise DimensionMismatch(f"lengths differ: {xv.size} vs {yv.size}")
    arr = _weight_array(w, xv.size)
    return float(xv @ (arr @ yv))


def spatial_correlation_matrix(
    x: StandardizedVector, y: StandardizedVector, w
) -> SpatialCorrelationMatrix:
    """Assemble I_x, I_xy, I_yx, I_y; the cross entries are computed independently."""
    xv, yv = _vector(x), _vector(y)
    if xv.size != yv.size:
        raise DimensionMismatch(f"lengths differ: {xv.size} vs {yv.size}")
    arr = _weight_array(w, xv.size)
    wx = arr @ xv
    wy = arr @ yv
    return SpatialCorrelationMatrix(
        i_x=float(xv @ wx),
        i_xy=float(xv @ wy),
        i_yx=float(yv @ wx),
        i_y=float(yv @ wy),
    )


def residual_moran(eps, w) -> float:
    """Moran's I of regression residuals after z-scoring them.

    Standardization uses the population standard deviation, matching the
    rest of the package. Raises ZeroVariance on a perfect fit (constant,
    typically all-zero, residuals), in which case the statistic is
    undefined and should be reported as such.
    """
    return morans_index(zscore(np.asarray(eps, dtype=float)), w)


def significance_by_regression(
    z1: StandardizedVector, z2: StandardizedVector, w
) -> CorrelationTest:
    """Significance of z1ᵀWz2 via the slope of n·(Wz2) regressed on z1.

    Because z1 has mean 0 and population variance 1, the OLS slope of
    n·(Wz2) on z1 (with intercept) equals the index itself; the usual
    two-sided t test on that slope, with n-2 degrees of freedom, supplies
    the p-value. Note the test is not argument-symmetric: swapping z1
    and z2 keeps the statistic (W symmetric) but changes the residuals,
    hence the p-value.
    """
    zv, z2v = _vector(z1), _vector(z2)
    if zv.size != z2v.size:
        raise DimensionMismatch(f"lengths differ: {zv.size} vs {z2v.size}")
    n = zv.size
    if n < 4:
        raise InsufficientData(f"regression test needs n >= 4, got {n}")
    arr = _weight_array(w, n)
    q = n * (arr @ z2v)

    zc = zv - zv.mean()
    qc = q - q.mean()
    szz = float(zc @ zc)
    if szz == 0.0:
        raise DegenerateRegression("regressor is constant")
    slope = float(zc @ qc) / szz
    intercept = q.mean() - slope * zv.mean()
    resid = q - (intercept + slope * zv)
    s2 = float(resid @ resid) / (n - 2)
    se = math.sqrt(s2 / szz)
    if se == 0.0:
        # perfect fit: zero slope carries no evidence, nonzero slope is exact
        t = 0.0 if slope == 0.0 else math.inf
        p = 1.0 if slope == 0.0 else 0.0
    else:
        t = slope / se
        p = 2.0 * float(stats.t.sf(abs(t), n - 2))
    return CorrelationTest(
        statistic=slope, slope_se=se, t_value=t, p_value=p, method=METHOD_REGRESSION
    )


def _permutation_count(w1: np.ndarray, z2v: np.ndarray, obs_abs: float,
                       seed: int, indices: range) -> int:
    count = 0
    for i in indices:
        # per-index generator: results are independent of scheduling
        rng = np.random.default_rng([seed, i])
        stat = float(w1 @ z2v[rng.permutation(z2v.size)])
        if abs(stat) >= obs_abs:
            count += 1
    return count


def significance_by_permutation(
    z1: StandardizedVector,
    z2: StandardizedVector,
    w,
    permutations: int,
    seed: int,
    workers: int = 1,
) -> CorrelationTest:
    """Pseudo p-value for z1ᵀWz2 by randomly permuting z2's positions.

    p = (1 + #{|stat_perm| >= |stat_obs|}) / (permutations + 1). Each
    permutation draws from its own generator keyed by (seed, index), so
    the result is deterministic and identical for any worker count.
    """
    zv, z2v = _vector(z1), _vector(z2)
    if zv.size != z2v.size:
        raise DimensionMismatch(f"lengths differ: {zv.size} vs {z2v.size}")
    if permutations < 99:
        raise InsufficientData(f"need at least 99 permutations, got {permutations}")
    arr = _weight_array(w, zv.size)
    w1 = arr @ zv  # W symmetric: z1ᵀW(Pz2) = (Wz1)ᵀ(Pz2), one matvec total
    obs = float(w1 @ z2v)
    obs_abs = abs(obs)

    if workers <= 1:
        count = _permutation_count(w1, z2v, obs_abs, seed, range(permutations))
    else:
        chunk = -(-permutations // workers)
        ranges = [
            range(lo, min(lo + chunk, permutations))
            for lo in range(0, permutations, chunk)
        ]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            counts = pool.map(
                lambda r: _permutation_count(w1, z2v, obs_abs, seed, r), ranges
            )
            count = sum(counts)
    p = (1.0 + count) / (permutations + 1.0)
    return CorrelationTest(
        statistic=obs,
        slope_se=math.nan,
        t_value=math.nan,
        p_value=p,
        method=METHOD_PERMUTATION,
    )


def temporal_acf(z: StandardizedVector, tau: int) -> float:
    """Autocorrelation of a standardized series at lag tau.

    Computed as the quadratic form zᵀW_tau z with the banded temporal
    weight matrix; identical to the plain sum Σ z_t z_{t-tau} / n.
    """
    zv = _vector(z)
    wt = temporal_weights(temporal_contiguity(zv.size, tau), tau)
    return float(zv @ (wt.w @ zv))
