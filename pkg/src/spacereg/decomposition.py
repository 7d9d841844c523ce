"""Closed-form decomposition of spatial regression coefficients.

For the general model y = a + bx + beta1(nWx) + beta2(nWy) + u on
standardized variables, residual orthogonality forces two identities,
obtained by taking inner products of the model with x and with y:

    x-identity   beta1 I_x  + beta2 I_xy = R - b
    y-identity   beta1 I_yx + beta2 I_y  = 1 - R b - delta

with R the Pearson correlation and delta the population residual
variance. Read as a linear system in (beta1, beta2), Cramer's rule gives

    O = (R - b) I_y - (1 - Rb - delta) I_xy
    P = I_x (1 - Rb - delta) - I_yx (R - b)
    Q = I_x I_y - I_xy I_yx

    beta1 = O / Q,   beta2 = P / Q.

So the spatial coefficients are a pure function of the correlation
statistics: no design matrix needs to be refit. Three modes are
exposed: ``full`` (b and delta as fitted), ``no_error`` (delta = 0) and
``canonical`` (additionally b = R, the simple-regression value on
standardized data), where the solution collapses to

    beta1 = (R^2 - 1) I_xy / Q,   beta2 = (1 - R^2) I_x / Q.

Q near zero means the lag and autoregressive terms are collinear and
the decomposition is refused; ``collinearity_q`` exposes that state,
and (1/I_y, R/I_x) are the theoretical single-term coefficients of the
pure autoregressive/lag models.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .correlation import SpatialCorrelationMatrix
from .errors import InputError, SingularSystem, ZeroDenominator

MODE_FULL = "full"
MODE_NO_ERROR = "no_error"
MODE_CANONICAL = "canonical"

# |Q| at or below this, relative to its additive scale, refuses to divide
SINGULARITY_RTOL = 1e-12

# practical collinearity threshold on corr(nWx, nWy); Q can be healthy
# while the two columns are still too aligned to estimate jointly
PRACTICAL_CORR_THRESHOLD = 0.95


@dataclass(frozen=True)
class DecompositionInput:
    """Inputs the closed form needs: R, b, delta, and the index matrix."""

    r: float
    b: float
    sigma_u_sq: float
    c: SpatialCorrelationMatrix

    def __post_init__(self):
        if abs(self.r) > 1.0 + 1e-12:
            raise InputError(f"Pearson correlation {self.r!r} outside [-1, 1]")
        if self.sigma_u_sq < 0.0:
            raise InputError(f"residual variance {self.sigma_u_sq!r} is negative")


@dataclass(frozen=True)
class DecompositionResult:
    beta1: float
    beta2: float
    det_o: float
    det_p: float
    det_q: float
    mode: str


@dataclass(frozen=True)
class IdentityCheckReport:
    """Left and right sides of the three coefficient identities.

    The identity labels eq21/eq22/eq24 are the stable names used in
    report output: eq21 is the x-identity, eq22 the y-identity, and
    eq24 the y-identity with the residual-variance term dropped. The
    eq24 gap equals delta by construction and is informative, not an
    error, so ``max_abs_gap`` covers eq21 and eq22 only.
    """

    eq21_left: float
    eq21_right: float
    eq22_left: float
    eq22_right: float
    eq24_left: float
    eq24_right: float
    max_abs_gap: float


class CollinearityCheck(NamedTuple):
    q: float
    exact_singular: bool
    practical_warning: bool


class PureCoefficients(NamedTuple):
    beta2_pure_sar: float
    beta1_pure_slx: float


def cramer_system(inp: DecompositionInput) -> tuple[float, float, float]:
    """The three determinants (O, P, Q) of the identity system."""
    c = inp.c
    rhs1 = inp.r - inp.b
    rhs2 = 1.0 - inp.r * inp.b - inp.sigma_u_sq
    det_o = rhs1 * c.i_y - rhs2 * c.i_xy
    det_p = c.i_x * rhs2 - c.i_yx * rhs1
    det_q = c.i_x * c.i_y - c.i_xy * c.i_yx
    return det_o, det_p, det_q


def _q_scale(c: SpatialCorrelationMatrix) -> float:
    return abs(c.i_x * c.i_y) + abs(c.i_xy * c.i_yx)


def _raise_if_singular(det_q: float, c: SpatialCorrelationMatrix) -> None:
    if abs(det_q) <= SINGULARITY_RTOL * _q_scale(c):
        raise SingularSystem(
            f"Q = {det_q!r} is singular at scale {_q_scale(c)!r}; "
            "lag and autoregressive terms are collinear"
        )


def _decompose(inp: DecompositionInput, mode: str) -> DecompositionResult:
    det_o, det_p, det_q = cramer_system(inp)
    _raise_if_singular(det_q, inp.c)
    return DecompositionResult(
        beta1=det_o / det_q,
        beta2=det_p / det_q,
        det_o=det_o,
        det_p=det_p,
        det_q=det_q,
        mode=mode,
    )


def decompose_full(inp: DecompositionInput) -> DecompositionResult:
    """Solve for (beta1, beta2) from fitted b and delta.

    Applied to the b, R, delta and C of an actual general-model OLS fit
    this reproduces the fitted beta1, beta2; that round trip is the
    strongest internal check the package has.
    """
    return _decompose(inp, MODE_FULL)


def decompose_no_error(
    r: float, b: float, c: SpatialCorrelationMatrix
) -> DecompositionResult:
    """The delta = 0 idealization: error variance treated as negligible."""
    return _decompose(DecompositionInput(r=r, b=b, sigma_u_sq=0.0, c=c), MODE_NO_ERROR)


def decompose_canonical(r: float, c: SpatialCorrelationMatrix) -> DecompositionResult:
    """The fully theoretical mode: b = R and delta = 0.

    Evaluates beta1 = -(I_xy / Q)(1 - R^2) and beta2 = (I_x / Q)(1 - R^2),
    equal to the determinant ratios O/Q and P/Q to within a couple of
    roundings. Factoring the index-over-Q ratio out first puts the two
    products of the x-identity on the same rounding path, so
    beta1 I_x + beta2 I_xy cancels to exactly zero rather than to a
    last-place residue for typical inputs.
    """
    inp = DecompositionInput(r=r, b=r, sigma_u_sq=0.0, c=c)
    det_o, det_p, det_q = cramer_system(inp)
    _raise_if_singular(det_q, c)
    u = 1.0 - r * r
    return DecompositionResult(
        beta1=-((c.i_xy / det_q) * u),
        beta2=(c.i_x / det_q) * u,
        det_o=det_o,
        det_p=det_p,
        det_q=det_q,
        mode=MODE_CANONICAL,
    )


def constant_term(
    beta1: float, beta2: float, mean_nwx: float, mean_nwy: float
) -> float:
    """Recover the intercept implied by the spatial terms.

    On standardized variables both x and y have zero mean, so taking
    means through the model leaves a = -beta1 mean(nWx) - beta2 mean(nWy).
    """
    return -beta1 * mean_nwx - beta2 * mean_nwy


def identity_check(
    inp: DecompositionInput, beta1: float, beta2: float
) -> IdentityCheckReport:
    """Evaluate both sides of the three identities for given coefficients."""
    c = inp.c
    eq21_left = beta1 * c.i_x + beta2 * c.i_xy
    eq21_right = inp.r - inp.b
    eq22_left = beta1 * c.i_yx + beta2 * c.i_y
    eq22_right = 1.0 - inp.r * inp.b - inp.sigma_u_sq
    eq24_left = eq22_left
    eq24_right = 1.0 - inp.r * inp.b
    return IdentityCheckReport(
        eq21_left=eq21_left,
        eq21_right=eq21_right,
        eq22_left=eq22_left,
        eq22_right=eq22_right,
        eq24_left=eq24_left,
        eq24_right=eq24_right,
        max_abs_gap=max(abs(eq21_left - eq21_right), abs(eq22_left - eq22_right)),
    )


def collinearity_q(
    c: SpatialCorrelationMatrix,
    corr_lag_auto: float | None = None,
    practical_threshold: float = PRACTICAL_CORR_THRESHOLD,
) -> CollinearityCheck:
    """Exact and practical collinearity state of the index matrix.

    ``exact_singular`` is the relative Q = 0 criterion. The practical
    warning fires on |corr(nWx, nWy)| above the threshold when that
    correlation is supplied; Q alone can miss near-collinear designs.
    """
    q = c.i_x * c.i_y - c.i_xy * c.i_yx
    exact = abs(q) <= SINGULARITY_RTOL * _q_scale(c)
    practical = corr_lag_auto is not None and abs(corr_lag_auto) > practical_threshold
    return CollinearityCheck(q=q, exact_singular=exact, practical_warning=practical)


def pure_coefficients(r: float, c: SpatialCorrelationMatrix) -> PureCoefficients:
    """Theoretical coefficients of the single-term pure models.

    beta2 = 1/I_y for the pure autoregressive model and beta1 = R/I_x for
    the pure lag model. These are algebraic values, not OLS estimates.
    """
    if c.i_y == 0.0:
        raise ZeroDenominator("I_y = 0; pure autoregressive coefficient undefined")
    if c.i_x == 0.0:
        raise ZeroDenominator("I_x = 0; pure lag coefficient undefined")
    return PureCoefficients(beta2_pure_sar=1.0 / c.i_y, beta1_pure_slx=r / c.i_x)
