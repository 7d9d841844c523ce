"""Design matrices and ordinary least squares for the spatial model family.

The full model is

    y = a + b x + beta1 (n W x) + beta2 (n W y) + u

and every variant is a column subset of its design matrix, in the fixed
order [ones, x, nWx, nWy]:

    ols_simple   y on [1, x]
    general      y on [1, x, nWx, nWy]
    sar          y on [1, x, nWy]        (no lag term)
    slx          y on [1, x, nWx]        (no autoregressive term)
    pure_sar     y on [nWy]              (no intercept by default)
    pure_slx     y on [nWx]              (no intercept by default)

Everything is estimated by OLS, including the nWy column, which keeps the
fitted coefficients consistent with the closed-form decomposition in
``decomposition``; maximum likelihood is deliberately out of scope.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .data import StandardizedVector
from .errors import (
    DegenerateVariance,
    DimensionMismatch,
    InsufficientData,
    NumericalError,
    RankDeficient,
)
from .weights import SpatialWeightMatrix

VARIANTS = ("ols_simple", "general", "sar", "slx", "pure_sar", "pure_slx")

# regressor columns per variant, in canonical order; intercept handled apart
_TERMS = {
    "ols_simple": ("x",),
    "general": ("x", "nWx", "nWy"),
    "sar": ("x", "nWy"),
    "slx": ("x", "nWx"),
    "pure_sar": ("nWy",),
    "pure_slx": ("nWx",),
}
_COEF_NAME = {"const": "a", "x": "b", "nWx": "beta1", "nWy": "beta2"}

# smallest/largest singular value below this ratio means rank deficiency
RANK_RTOL = 1e-10


@dataclass(frozen=True)
class ModelSpec:
    """A model variant plus whether its design carries an intercept.

    ``include_intercept=None`` resolves to the variant default: the pure
    single-term variants drop the intercept, everything else keeps it.
    """

    variant: str
    include_intercept: bool | None = None

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}; expected one of {VARIANTS}")
        if self.include_intercept is None:
            object.__setattr__(
                self, "include_intercept", self.variant not in ("pure_sar", "pure_slx")
            )

    @property
    def terms(self) -> tuple[str, ...]:
        cols = _TERMS[self.variant]
        return (("const",) + cols) if self.include_intercept else cols

    @property
    def coefficient_names(self) -> tuple[str, ...]:
        return tuple(_COEF_NAME[t] for t in self.terms)


@dataclass(frozen=True)
class RegressionFit:
    """An OLS fit with per-coefficient tests and global diagnostics.

    ``sigma_u_sq`` is the population residual variance (divide by n);
    ``reg_std_error`` divides by n - k as usual. ``durbin_watson`` is
    computed over residuals in input row order, which for spatial data
    is a heuristic ordering.
    """

    variant: str
    names: tuple[str, ...]
    coefficients: dict[str, float]
    standard_errors: dict[str, float]
    t_values: dict[str, float]
    p_values: dict[str, float]
    residuals: np.ndarray
    fitted: np.ndarray
    response: np.ndarray
    n: int
    k: int
    include_intercept: bool
    sigma_u_sq: float
    r_squared: float
    reg_std_error: float
    f_statistic: float
    durbin_watson: float

    def __post_init__(self):
        for field in ("residuals", "fitted", "response"):
            arr = np.asarray(getattr(self, field), dtype=float).copy()
            arr.setflags(write=False)
            object.__setattr__(self, field, arr)


def build_design_matrix(
    spec: ModelSpec, x: StandardizedVector, y: StandardizedVector, w: SpatialWeightMatrix
) -> np.ndarray:
    """Stack the variant's columns from {ones, x, nWx, nWy}, in that order."""
    xv, yv = x.values, y.values
    if xv.size != yv.size:
        raise DimensionMismatch(f"x and y lengths differ: {xv.size} vs {yv.size}")
    if w.n != xv.size:
        raise DimensionMismatch(f"weight matrix is {w.n}x{w.n}, data has n={xv.size}")
    n = xv.size
    pool = {
        "const": np.ones(n),
        "x": xv,
        "nWx": n * (w.w @ xv),
        "nWy": n * (w.w @ yv),
    }
    return np.column_stack([pool[t] for t in spec.terms])


def _t_test(coef: float, se: float, df: int) -> tuple[float, float]:
    if se == 0.0:
        # exact coefficient: zero carries no evidence, nonzero is certain
        if coef == 0.0:
            return 0.0, 1.0
        return math.copysign(math.inf, coef), 0.0
    t = coef / se
    return t, 2.0 * float(stats.t.sf(abs(t), df))


def diagnostics(
    response, residuals, k: int, include_intercept: bool = True
) -> dict[str, float]:
    """Global fit diagnostics from a residual vector.

    Returns r_squared, reg_std_error, f_statistic and durbin_watson.
    R-squared is centered when an intercept is present, uncentered
    otherwise; F uses (k-1, n-k) degrees of freedom with an intercept
    and (k, n-k) without. A perfect fit (r_squared rounding to 1) gives
    F = inf and DW = nan for the caller to mark; residuals at rounding
    level have no serial structure worth reporting.
    """
    y = np.asarray(response, dtype=float)
    u = np.asarray(residuals, dtype=float)
    if y.size != u.size:
        raise DimensionMismatch(f"response ({y.size}) vs residuals ({u.size})")
    n = y.size
    if n <= k:
        raise InsufficientData(f"need n > k, got n={n}, k={k}")
    ssr = float(u @ u)
    if include_intercept:
        dev = y - y.mean()
        sst = float(dev @ dev)
    else:
        sst = float(y @ y)
    if sst == 0.0:
        raise DegenerateVariance("response has zero variance; diagnostics undefined")
    r2 = 1.0 - ssr / sst
    if -1e-12 < r2 < 0.0:
        r2 = 0.0
    if 1.0 < r2 < 1.0 + 1e-12:
        r2 = 1.0
    s = math.sqrt(ssr / (n - k))
    num_df = k - 1 if include_intercept else k
    if num_df == 0:
        f = math.nan
    elif r2 == 1.0:
        f = math.inf
    else:
        f = (r2 / num_df) / ((1.0 - r2) / (n - k))
    if ssr == 0.0 or r2 == 1.0:
        # residuals are zero or pure rounding noise; DW would be noise too
        dw = math.nan
    else:
        du = np.diff(u)
        dw = float(du @ du) / ssr
    return {
        "r_squared": r2,
        "reg_std_error": s,
        "f_statistic": f,
        "durbin_watson": dw,
    }


def ols_fit(
    design,
    response,
    *,
    names: tuple[str, ...] | None = None,
    variant: str = "custom",
    include_intercept: bool | None = None,
) -> RegressionFit:
    """Least-squares fit of ``response`` on the columns of ``design``.

    The solve goes through the singular value decomposition rather than
    the explicit normal-equations inverse; a smallest-to-largest singular
    value ratio under 1e-10 raises RankDeficient, which for this model
    family signals collinear nWx and nWy columns.
    """
    X = np.asarray(design, dtype=float)
    y = np.asarray(response, dtype=float)
    if X.ndim != 2:
        raise DimensionMismatch(f"design must be 2-d, got shape {X.shape}")
    n, k = X.shape
    if y.shape != (n,):
        raise DimensionMismatch(f"response shape {y.shape} does not match design rows {n}")
    if n <= k:
        raise InsufficientData(f"need more rows than columns, got n={n}, k={k}")
    if names is None:
        names = tuple(f"c{i}" for i in range(k))
    if len(names) != k:
        raise DimensionMismatch(f"{len(names)} names for {k} columns")
    if include_intercept is None:
        include_intercept = bool(np.all(X[:, 0] == 1.0))

    u_mat, sv, vt = np.linalg.svd(X, full_matrices=False)
    if sv[0] == 0.0 or sv[-1] / sv[0] < RANK_RTOL:
        raise RankDeficient(
            f"design matrix is rank deficient (singular value ratio {sv[-1] / sv[0] if sv[0] else 0.0:.3e})"
        )
    coef = vt.T @ ((u_mat.T @ y) / sv)
    fitted = X @ coef
    resid = y - fitted

    sigma_u_sq = float(resid @ resid) / n
    diag = diagnostics(y, resid, k, include_intercept)
    s = diag["reg_std_error"]
    # (X'X)^-1 diagonal via the decomposition already in hand
    xtx_inv_diag = np.einsum("ji,ji->i", vt / sv[:, None], vt / sv[:, None])
    ses = s * np.sqrt(xtx_inv_diag)
    df = n - k
    tests = [_t_test(float(c), float(se), df) for c, se in zip(coef, ses)]

    return RegressionFit(
        variant=variant,
        names=names,
        coefficients={nm: float(c) for nm, c in zip(names, coef)},
        standard_errors={nm: float(se) for nm, se in zip(names, ses)},
        t_values={nm: t for nm, (t, _) in zip(names, tests)},
        p_values={nm: p for nm, (_, p) in zip(names, tests)},
        residuals=resid,
        fitted=fitted,
        response=y,
        n=n,
        k=k,
        include_intercept=include_intercept,
        sigma_u_sq=sigma_u_sq,
        r_squared=diag["r_squared"],
        reg_std_error=s,
        f_statistic=diag["f_statistic"],
        durbin_watson=diag["durbin_watson"],
    )


def fit_model(
    spec: ModelSpec, x: StandardizedVector, y: StandardizedVector, w: SpatialWeightMatrix
) -> RegressionFit:
    """Build the variant's design matrix and fit y on it by OLS."""
    design = build_design_matrix(spec, x, y, w)
    return ols_fit(
        design,
        y.values,
        names=spec.coefficient_names,
        variant=spec.variant,
        include_intercept=spec.include_intercept,
    )


def residual_variance(fit: RegressionFit) -> float:
    """Population residual variance (1/n) u'u.

    Residual orthogonality makes (1/n) y'u equal the same number for any
    OLS fit; both are computed and compared as a consistency check.
    """
    n = fit.n
    direct = float(fit.residuals @ fit.residuals) / n
    via_response = float(fit.response @ fit.residuals) / n
    scale = max(1.0, abs(direct))
    if abs(direct - via_response) > 1e-9 * scale:
        raise NumericalError(
            f"residual orthogonality violated: (1/n)u'u={direct!r} vs (1/n)y'u={via_response!r}"
        )
    return direct
