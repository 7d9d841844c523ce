"""Model-selection rules over synthetic significance evidence."""

import pytest

from spacereg import (
    AdvisorDecision,
    CorrelationEvidence,
    CorrelationTest,
    FitQuality,
    narrative_report,
    select_model,
)
from spacereg.advisor import (
    RULE_FALLBACK,
    RULE_GENERAL,
    RULE_SPECIAL_SAR,
    RULE_SPECIAL_SLX,
)
from spacereg.errors import InputError


def t(stat: float, p: float) -> CorrelationTest:
    return CorrelationTest(
        statistic=stat, slope_se=0.05, t_value=stat / 0.05, p_value=p,
        method="regression_t",
    )


def evidence(p_ix, p_iy, p_ixy, p_iyx=None, q=0.04, corr=0.3, alpha=0.05):
    return CorrelationEvidence(
        test_ix=t(-0.2, p_ix),
        test_iy=t(-0.1, p_iy),
        test_ixy=t(-0.15, p_ixy),
        test_iyx=t(-0.15, p_iyx if p_iyx is not None else p_ixy),
        q=q,
        corr_lag_auto=corr,
        alpha=alpha,
    )


def test_general_rule():
    d = select_model(evidence(p_ix=0.01, p_iy=0.3, p_ixy=0.02))
    assert d.recommended == "general"
    assert d.rule_fired == RULE_GENERAL
    assert not d.collinearity_flag
    assert "significant" in d.rationale


def test_special_sar_rule():
    d = select_model(evidence(p_ix=0.01, p_iy=0.02, p_ixy=0.5))
    assert d.recommended == "sar"
    assert d.rule_fired == RULE_SPECIAL_SAR


def test_special_slx_rule():
    d = select_model(evidence(p_ix=0.5, p_iy=0.7, p_ixy=0.01))
    assert d.recommended == "slx"
    assert d.rule_fired == RULE_SPECIAL_SLX


def test_alpha_boundary_is_inclusive():
    d = select_model(evidence(p_ix=0.05, p_iy=0.5, p_ixy=0.05))
    assert d.rule_fired == RULE_GENERAL


def test_fallback_without_fits_ranks_by_p_value():
    d = select_model(evidence(p_ix=0.2, p_iy=0.6, p_ixy=0.4))
    assert d.rule_fired == RULE_FALLBACK
    assert d.recommended == "sar"  # p(I_x) <= p(I_xy)
    d2 = select_model(evidence(p_ix=0.4, p_iy=0.6, p_ixy=0.2))
    assert d2.recommended == "slx"


def test_fallback_with_fits_ranks_by_standard_error():
    fits = {
        "sar": FitQuality(variant="sar", reg_std_error=0.30, spatial_p_value=0.20),
        "slx": FitQuality(variant="slx", reg_std_error=0.20, spatial_p_value=0.90),
    }
    d = select_model(evidence(p_ix=0.2, p_iy=0.6, p_ixy=0.4), fits)
    assert d.recommended == "slx"
    assert "fits better" in d.rationale
    # tie on s falls through to the spatial term's p-value
    fits_tie = {
        "sar": FitQuality(variant="sar", reg_std_error=0.25, spatial_p_value=0.10),
        "slx": FitQuality(variant="slx", reg_std_error=0.25, spatial_p_value=0.30),
    }
    d2 = select_model(evidence(p_ix=0.2, p_iy=0.6, p_ixy=0.4), fits_tie)
    assert d2.recommended == "sar"


def test_practical_collinearity_demotes_general():
    d = select_model(evidence(p_ix=0.01, p_iy=0.3, p_ixy=0.02, corr=0.99))
    assert d.rule_fired == RULE_GENERAL
    assert d.recommended in ("sar", "slx")
    assert d.collinearity_flag
    assert "collinear" in d.rationale


def test_exact_singularity_forces_single_term():
    # dyadic entries make I_x I_y equal I_xy I_yx exactly, so q is 0
    ev = CorrelationEvidence(
        test_ix=t(-0.25, 0.01),
        test_iy=t(-0.0625, 0.03),
        test_ixy=t(-0.125, 0.01),
        test_iyx=t(-0.125, 0.01),
        q=0.0,
        corr_lag_auto=0.5,
    )
    d = select_model(ev)
    assert d.collinearity_flag
    assert d.recommended in ("sar", "slx")


def test_decision_invariant_is_enforced():
    with pytest.raises(ValueError):
        AdvisorDecision(
            recommended="general", rule_fired=RULE_GENERAL,
            rationale="x", collinearity_flag=True,
        )


def test_evidence_alpha_gate():
    with pytest.raises(InputError):
        evidence(p_ix=0.1, p_iy=0.1, p_ixy=0.1, alpha=1.0)


def test_narrative_mentions_the_decision():
    ev = evidence(p_ix=0.01, p_iy=0.3, p_ixy=0.02, corr=0.99)
    d = select_model(ev)
    text = narrative_report(d, ev)
    assert f"Recommended model: {d.recommended}" in text
    assert f"Rule fired: {d.rule_fired}" in text
    assert "Warning" in text
    d2 = select_model(evidence(p_ix=0.01, p_iy=0.3, p_ixy=0.02))
    text2 = narrative_report(d2, evidence(p_ix=0.01, p_iy=0.3, p_ixy=0.02))
    assert "Warning" not in text2
