"""Correlation statistics against hand values and brute-force double loops.

Key oracles, all hand arithmetic:
  * x=[1,2,3,4], y=[2,1,4,3]: covariance 3/4, both variances 5/4, R=0.6.
  * equal off-diagonal weights 1/(n(n-1)): I = -1/(n-1) for any z.
  * series [1,-1,1,-1]: acf(1) = -3/4, acf(2) = 1/2, acf(3) = -1/4.
  * n=4 gives the t test 2 degrees of freedom, where the two-sided
    p-value has the closed form 1 - |t|/sqrt(2 + t^2).
"""

import math

import numpy as np
import pytest

from spacereg import (
    CorrelationTest,
    SpatialCorrelationMatrix,
    cross_correlation,
    morans_index,
    pearson_matrix,
    pearson_r,
    residual_moran,
    significance_by_permutation,
    significance_by_regression,
    spatial_correlation_matrix,
    temporal_acf,
    zscore,
)
from spacereg.errors import (
    DimensionMismatch,
    InsufficientData,
    LengthMismatch,
    ZeroVariance,
)
from .conftest import random_standardized_pair, random_weight_matrix


def equal_weights(n: int) -> np.ndarray:
    w = np.full((n, n), 1.0 / (n * (n - 1)))
    np.fill_diagonal(w, 0.0)
    return w


def test_pearson_hand_value():
    x = zscore([1.0, 2.0, 3.0, 4.0])
    y = zscore([2.0, 1.0, 4.0, 3.0])
    assert pearson_r(x, y) == pytest.approx(0.6, abs=1e-15)


def test_pearson_matrix_diagonal_is_computed():
    rng = np.random.default_rng(2)
    x, y = random_standardized_pair(rng, 40)
    m = pearson_matrix(x, y)
    assert m[0, 0] == pytest.approx(1.0, abs=1e-12)
    assert m[1, 1] == pytest.approx(1.0, abs=1e-12)
    assert m[0, 1] == m[1, 0] == pearson_r(x, y)
    with pytest.raises(LengthMismatch):
        pearson_r(x, zscore([1.0, 2.0]))


def test_moran_equal_weights_is_minus_one_over_n_minus_one():
    for n in (4, 7, 12):
        rng = np.random.default_rng(n)
        z = zscore(rng.normal(0, 1, n))
        assert morans_index(z, equal_weights(n)) == pytest.approx(
            -1.0 / (n - 1), abs=1e-13
        )


def test_moran_two_units_is_exactly_minus_one():
    z = zscore([3.0, 4.0])
    assert np.array_equal(z.values, [-1.0, 1.0])
    assert morans_index(z, [[0.0, 0.5], [0.5, 0.0]]) == -1.0


def test_quadratic_forms_match_double_loops():
    rng = np.random.default_rng(17)
    n = 23
    w = random_weight_matrix(rng, n)
    x, y = random_standardized_pair(rng, n)
    xv, yv = x.values, y.values
    ix = sum(w.w[i, j] * xv[i] * xv[j] for i in range(n) for j in range(n))
    ixy = sum(w.w[i, j] * xv[i] * yv[j] for i in range(n) for j in range(n))
    assert morans_index(x, w) == pytest.approx(ix, abs=1e-12)
    assert cross_correlation(x, y, w) == pytest.approx(ixy, abs=1e-12)
    # symmetric W makes the bilinear form symmetric in its arguments
    assert cross_correlation(x, y, w) == pytest.approx(
        cross_correlation(y, x, w), abs=1e-12
    )


def test_correlation_matrix_entries_and_cross_agreement():
    rng = np.random.default_rng(29)
    n = 15
    w = random_weight_matrix(rng, n)
    x, y = random_standardized_pair(rng, n)
    c = spatial_correlation_matrix(x, y, w)
    assert c.i_x == morans_index(x, w)
    assert c.i_y == morans_index(y, w)
    assert c.i_xy == cross_correlation(x, y, w)
    assert abs(c.i_xy - c.i_yx) <= 1e-12
    with pytest.raises(DimensionMismatch):
        SpatialCorrelationMatrix(i_x=0.1, i_xy=0.2, i_yx=0.3, i_y=0.1)


def test_residual_moran_standardizes_first():
    # residuals [3, 1] standardize to [1, -1]; antithetic pattern gives -1
    assert residual_moran([3.0, 1.0], [[0.0, 0.5], [0.5, 0.0]]) == -1.0
    with pytest.raises(ZeroVariance):
        residual_moran([0.0, 0.0, 0.0], equal_weights(3))


def test_regression_test_slope_equals_statistic():
    rng = np.random.default_rng(31)
    for _ in range(20):
        n = int(rng.integers(5, 60))
        w = random_weight_matrix(rng, n)
        x, y = random_standardized_pair(rng, n, rho=rng.uniform(-0.9, 0.9))
        t = significance_by_regression(x, y, w)
        assert abs(t.statistic - cross_correlation(x, y, w)) <= 1e-12
        assert 0.0 <= t.p_value <= 1.0
        assert t.method == "regression_t"


def test_regression_test_p_value_closed_form_df2():
    # n = 4 leaves 2 degrees of freedom, where p = 1 - |t|/sqrt(2 + t^2)
    rng = np.random.default_rng(37)
    w = random_weight_matrix(rng, 4)
    x, y = random_standardized_pair(rng, 4, rho=0.5)
    t = significance_by_regression(x, y, w)
    assert math.isfinite(t.t_value) and t.slope_se > 0.0
    expected = 1.0 - abs(t.t_value) / math.sqrt(2.0 + t.t_value**2)
    assert t.p_value == pytest.approx(expected, abs=1e-12)


def test_regression_test_zero_weight_matrix_convention():
    x, y = random_standardized_pair(np.random.default_rng(5), 8)
    t = significance_by_regression(x, y, np.zeros((8, 8)))
    assert t.statistic == 0.0 and t.t_value == 0.0 and t.p_value == 1.0


def test_regression_test_needs_four_units():
    x, y = random_standardized_pair(np.random.default_rng(6), 3)
    with pytest.raises(InsufficientData):
        significance_by_regression(x, y, equal_weights(3))


def test_permutation_test_determinism_and_worker_independence():
    rng = np.random.default_rng(41)
    n = 30
    w = random_weight_matrix(rng, n)
    x, y = random_standardized_pair(rng, n)
    a = significance_by_permutation(x, y, w, permutations=199, seed=9)
    b = significance_by_permutation(x, y, w, permutations=199, seed=9)
    c = significance_by_permutation(x, y, w, permutations=199, seed=9, workers=3)
    assert a.p_value == b.p_value == c.p_value
    assert a.statistic == cross_correlation(x, y, w)
    assert a.method == "permutation"
    assert 1.0 / 200.0 <= a.p_value <= 1.0
    d = significance_by_permutation(x, y, w, permutations=199, seed=10)
    # different seed may differ; both remain valid pseudo p-values
    assert 1.0 / 200.0 <= d.p_value <= 1.0


def test_permutation_test_flags_a_strong_gradient():
    # points on a line with a smooth gradient: strong positive autocorrelation
    n = 40
    pts = np.arange(n, dtype=float)
    d = np.abs(pts[:, None] - pts[None, :])
    np.fill_diagonal(d, 1.0)
    v = 1.0 / d
    np.fill_diagonal(v, 0.0)
    w = v / v.sum()
    z = zscore(pts + 0.01 * np.sin(pts))
    t = significance_by_permutation(z, z, w, permutations=199, seed=1)
    assert t.p_value <= 0.05


def test_permutation_test_input_gates():
    x, y = random_standardized_pair(np.random.default_rng(8), 10)
    w = equal_weights(10)
    with pytest.raises(InsufficientData):
        significance_by_permutation(x, y, w, permutations=50, seed=0)
    with pytest.raises(DimensionMismatch):
        significance_by_permutation(x, y, equal_weights(9), permutations=99, seed=0)


def test_correlation_test_validates_fields():
    with pytest.raises(ValueError):
        CorrelationTest(statistic=0.1, slope_se=0.1, t_value=1.0, p_value=0.5, method="bogus")
    with pytest.raises(ValueError):
        CorrelationTest(statistic=0.1, slope_se=0.1, t_value=1.0, p_value=1.5, method="permutation")


def test_temporal_acf_hand_values():
    z = zscore([1.0, -1.0, 1.0, -1.0])
    assert np.array_equal(z.values, [1.0, -1.0, 1.0, -1.0])
    assert temporal_acf(z, 1) == pytest.approx(-0.75, abs=1e-15)
    assert temporal_acf(z, 2) == pytest.approx(0.5, abs=1e-15)
    assert temporal_acf(z, 3) == pytest.approx(-0.25, abs=1e-15)


def test_temporal_acf_equals_direct_sum():
    rng = np.random.default_rng(53)
    z = zscore(rng.normal(0, 1, 31))
    zv = z.values
    n = zv.size
    for tau in range(1, n):
        direct = float(zv[tau:] @ zv[:-tau]) / n
        assert temporal_acf(z, tau) == pytest.approx(direct, abs=1e-14)
