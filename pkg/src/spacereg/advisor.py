"""Model selection from correlation evidence.

The decision rules turn the theoretical conditions on the correlation
indexes into significance-test conditions ("index nonzero" becomes
"p <= alpha") and apply them in a fixed order:

    general      I_x and I_xy both significant, Q not singular
    special_sar  I_x and I_y significant, I_xy not
    special_slx  I_x not significant, I_xy significant

When no rule matches (a common outcome on small samples), a
comprehensive fallback compares the fitted single-lag models and keeps
the better one, ranked by regression standard error and then by the
spatial coefficient's p-value. Collinearity between nWx and nWy, exact
(Q singular) or practical (|corr| above threshold), forbids keeping
both terms, so the general model is never recommended in that state.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .correlation import CorrelationTest
from .decomposition import PRACTICAL_CORR_THRESHOLD, SINGULARITY_RTOL
from .errors import InputError

RULE_GENERAL = "general"
RULE_SPECIAL_SAR = "special_sar"
RULE_SPECIAL_SLX = "special_slx"
RULE_FALLBACK = "fallback_comprehensive"


@dataclass(frozen=True)
class CorrelationEvidence:
    """Everything the rules look at: four tests, Q, and term collinearity."""

    test_ix: CorrelationTest
    test_iy: CorrelationTest
    test_ixy: CorrelationTest
    test_iyx: CorrelationTest
    q: float
    corr_lag_auto: float
    alpha: float = 0.05

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise InputError(f"alpha must be in (0, 1), got {self.alpha!r}")


@dataclass(frozen=True)
class FitQuality:
    """Minimal fitted-model evidence the comprehensive fallback ranks on."""

    variant: str
    reg_std_error: float
    spatial_p_value: float


@dataclass(frozen=True)
class AdvisorDecision:
    recommended: str
    rule_fired: str
    rationale: str
    collinearity_flag: bool

    def __post_init__(self):
        if self.collinearity_flag and self.recommended not in ("sar", "slx"):
            raise ValueError(
                f"collinear terms cannot recommend {self.recommended!r}; one term must go"
            )


def _exact_singular(evidence: CorrelationEvidence) -> bool:
    # same relative criterion as the decomposition module; the index
    # magnitudes are recovered from the tests' statistics
    i_x = evidence.test_ix.statistic
    i_y = evidence.test_iy.statistic
    i_xy = evidence.test_ixy.statistic
    i_yx = evidence.test_iyx.statistic
    scale = abs(i_x * i_y) + abs(i_xy * i_yx)
    return abs(evidence.q) <= SINGULARITY_RTOL * scale


def _better_single_term(
    evidence: CorrelationEvidence,
    candidate_fits: Mapping[str, FitQuality] | None,
) -> tuple[str, str]:
    """Pick sar or slx; returns (variant, reason fragment)."""
    if candidate_fits and "sar" in candidate_fits and "slx" in candidate_fits:
        sar, slx = candidate_fits["sar"], candidate_fits["slx"]
        if (sar.reg_std_error, sar.spatial_p_value) <= (slx.reg_std_error, slx.spatial_p_value):
            return "sar", (
                f"sar fits better (s={sar.reg_std_error:.4f} vs {slx.reg_std_error:.4f}, "
                f"spatial-term p={sar.spatial_p_value:.4f} vs {slx.spatial_p_value:.4f})"
            )
        return "slx", (
            f"slx fits better (s={slx.reg_std_error:.4f} vs {sar.reg_std_error:.4f}, "
            f"spatial-term p={slx.spatial_p_value:.4f} vs {sar.spatial_p_value:.4f})"
        )
    # no fits to compare: lean on which index shows stronger evidence
    if evidence.test_ix.p_value <= evidence.test_ixy.p_value:
        return "sar", (
            f"autocorrelation of x is the stronger signal "
            f"(p={evidence.test_ix.p_value:.4f} vs p={evidence.test_ixy.p_value:.4f})"
        )
    return "slx", (
        f"cross-correlation is the stronger signal "
        f"(p={evidence.test_ixy.p_value:.4f} vs p={evidence.test_ix.p_value:.4f})"
    )


def select_model(
    evidence: CorrelationEvidence,
    candidate_fits: Mapping[str, FitQuality] | None = None,
) -> AdvisorDecision:
    """Apply the decision rules to the evidence.

    ``candidate_fits``, keyed by variant, lets the comprehensive
    fallback (and the collinearity demotion) rank the fitted sar and
    slx models; without it the ranking falls back to the significance
    tests alone.
    """
    alpha = evidence.alpha
    sig_ix = evidence.test_ix.p_value <= alpha
    sig_iy = evidence.test_iy.p_value <= alpha
    sig_ixy = evidence.test_ixy.p_value <= alpha
    exact_singular = _exact_singular(evidence)
    collinear = abs(evidence.corr_lag_auto) > PRACTICAL_CORR_THRESHOLD or exact_singular

    p_bits = (
        f"p(I_x)={evidence.test_ix.p_value:.4f}, p(I_y)={evidence.test_iy.p_value:.4f}, "
        f"p(I_xy)={evidence.test_ixy.p_value:.4f} at alpha={alpha:g}"
    )

    if sig_ix and sig_ixy and not exact_singular:
        rule = RULE_GENERAL
        if collinear:
            recommended, why = _better_single_term(evidence, candidate_fits)
            rationale = (
                f"Both I_x and I_xy are significant ({p_bits}), but the lag and "
                f"autoregressive terms are collinear "
                f"(|corr(nWx, nWy)|={abs(evidence.corr_lag_auto):.4f}); "
                f"one term must be discarded: {why}."
            )
        else:
            recommended = "general"
            rationale = (
                f"Both I_x and I_xy are significant and Q={evidence.q:.6g} is "
                f"nonsingular ({p_bits}); the full model with both spatial terms "
                f"is identified."
            )
    elif sig_ix and sig_iy and not sig_ixy:
        rule = RULE_SPECIAL_SAR
        recommended = "sar"
        rationale = (
            f"I_x and I_y are significant while I_xy is not ({p_bits}); "
            f"the autoregressive term suffices."
        )
    elif not sig_ix and sig_ixy:
        rule = RULE_SPECIAL_SLX
        recommended = "slx"
        rationale = (
            f"I_x is not significant but I_xy is ({p_bits}); "
            f"the lag term carries the spatial signal."
        )
    else:
        rule = RULE_FALLBACK
        recommended, why = _better_single_term(evidence, candidate_fits)
        rationale = (
            f"No rule condition is met ({p_bits}); comprehensive comparison of the "
            f"single-term models: {why}."
        )

    if collinear:
        rationale += (
            " Collinearity flag is set"
            + (" (Q is singular)" if exact_singular else "")
            + f" (|corr(nWx, nWy)|={abs(evidence.corr_lag_auto):.4f}"
            + f" vs threshold {PRACTICAL_CORR_THRESHOLD:g})."
        )

    return AdvisorDecision(
        recommended=recommended,
        rule_fired=rule,
        rationale=rationale,
        collinearity_flag=collinear,
    )


def narrative_report(decision: AdvisorDecision, evidence: CorrelationEvidence) -> str:
    """Deterministic multi-line explanation of a decision."""
    lines = [
        f"Rule fired: {decision.rule_fired}",
        f"Recommended model: {decision.recommended}",
        (
            f"Significance at alpha={evidence.alpha:g}: "
            f"I_x p={evidence.test_ix.p_value:.4f}, "
            f"I_y p={evidence.test_iy.p_value:.4f}, "
            f"I_xy p={evidence.test_ixy.p_value:.4f}, "
            f"I_yx p={evidence.test_iyx.p_value:.4f}"
        ),
        f"Determinant Q: {evidence.q:.6g}",
        f"corr(nWx, nWy): {evidence.corr_lag_auto:.4f}",
    ]
    if decision.collinearity_flag:
        lines.append(
            "Warning: the spatial lag and autoregressive terms are collinear; "
            "models with both terms are excluded."
        )
    lines.append(decision.rationale)
    return "\n".join(lines)
