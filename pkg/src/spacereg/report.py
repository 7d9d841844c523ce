"""End-to-end analysis pipeline and report rendering.

One call runs standardization, weights, the correlation statistics with
significance, the model fits, the coefficient decomposition, identity
checks and the model recommendation, and returns a JSON-ready report
dict. The dict's values are pushed through canonical 15-significant-
digit formatting at assembly time, so serializing the same inputs and
configuration twice yields byte-identical output regardless of worker
count. All four permutation tests reuse the configured seed; each
permutation index derives its own generator from (seed, index).

Undefined statistics (a perfect fit's Durbin-Watson, a singular
decomposition's coefficients) appear as explicit nulls, never omitted
keys, so consumers can rely on the report's shape.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import correlation as corr
from . import decomposition as deco
from .advisor import AdvisorDecision, CorrelationEvidence, FitQuality, select_model
from .data import RawAttributeTable, StandardizedVector, log_transform, zscore
from .errors import (
    InputError,
    InsufficientData,
    NumericalError,
    SingularSystem,
    ZeroVariance,
)
from .io import canonical_float, parse_distances, read_attributes, sig15
from .regression import VARIANTS, ModelSpec, RegressionFit, fit_model, residual_variance
from .weights import SpatialWeightMatrix, inverse_distance_contiguity, normalize_global

DEFAULT_VARIANTS = ("ols_simple", "general", "sar", "slx")
_INDEX_PAIRS = (("i_x", "x", "x"), ("i_xy", "x", "y"), ("i_yx", "y", "x"), ("i_y", "y", "y"))


@dataclass(frozen=True)
class AnalysisConfig:
    """Everything a run needs; exactly mirrors the CLI flags."""

    attrs_path: str
    dist_path: str
    dist_format: str = "square"
    log_transform: bool = False
    alpha: float = 0.05
    model: str | None = None
    seed: int = 0
    permutations: int = 999
    output: str = "json"
    workers: int = 1

    def __post_init__(self):
        if self.dist_format not in ("square", "long"):
            raise InputError(f"dist_format must be square or long, got {self.dist_format!r}")
        if not 0.0 < self.alpha < 1.0:
            raise InputError(f"alpha must be in (0, 1), got {self.alpha!r}")
        if self.model is not None and self.model not in VARIANTS:
            raise InputError(f"unknown model {self.model!r}; expected one of {VARIANTS}")
        if self.permutations != 0 and self.permutations < 99:
            raise InputError(
                f"permutations must be 0 (disabled) or at least 99, got {self.permutations}"
            )
        if self.output not in ("json", "text"):
            raise InputError(f"output must be json or text, got {self.output!r}")
        if self.workers < 1:
            raise InputError(f"workers must be at least 1, got {self.workers}")


@dataclass
class AnalysisResult:
    """The report dict plus the arrays that figures are drawn from."""

    report: dict
    config: AnalysisConfig
    ids: tuple[str, ...]
    x: StandardizedVector
    y: StandardizedVector
    w: SpatialWeightMatrix
    lag: np.ndarray          # n W x
    auto: np.ndarray         # n W y
    c: corr.SpatialCorrelationMatrix
    fits: dict[str, RegressionFit] = field(default_factory=dict)
    decision: AdvisorDecision | None = None


def _plain_corr(u: np.ndarray, v: np.ndarray) -> float:
    du = u - u.mean()
    dv = v - v.mean()
    su = float(du @ du)
    sv = float(dv @ dv)
    if su == 0.0 or sv == 0.0:
        return 0.0
    return float(du @ dv) / float(np.sqrt(su * sv))


def _test_block(t: corr.CorrelationTest) -> dict:
    return {
        "statistic": t.statistic,
        "slope_se": t.slope_se,
        "t_value": t.t_value,
        "p_value": t.p_value,
        "method": t.method,
    }


def _identity_pairs(rep: deco.IdentityCheckReport) -> dict:
    return {
        "eq21": [rep.eq21_left, rep.eq21_right],
        "eq22": [rep.eq22_left, rep.eq22_right],
        "eq24": [rep.eq24_left, rep.eq24_right],
    }


def _decomposition_block(
    inp: deco.DecompositionInput, mode_fn, means: tuple[float, float]
) -> tuple[dict, deco.IdentityCheckReport | None]:
    """Run one decomposition mode into its report block; singular is not fatal here."""
    det_o, det_p, det_q = deco.cramer_system(inp)
    try:
        result = mode_fn()
    except SingularSystem as exc:
        block = {
            "mode": None,
            "singular": True,
            "beta1": None,
            "beta2": None,
            "a": None,
            "O": det_o,
            "P": det_p,
            "Q": det_q,
            "identity_checks": None,
            "note": str(exc),
        }
        return block, None
    a = deco.constant_term(result.beta1, result.beta2, means[0], means[1])
    checks = deco.identity_check(inp, result.beta1, result.beta2)
    block = {
        "mode": result.mode,
        "singular": False,
        "beta1": result.beta1,
        "beta2": result.beta2,
        "a": a,
        "O": result.det_o,
        "P": result.det_p,
        "Q": result.det_q,
        "identity_checks": _identity_pairs(checks),
    }
    return block, checks


def _canonicalize(obj):
    if isinstance(obj, dict):
        return {k: _canonicalize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_canonicalize(v) for v in obj]
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        return canonical_float(obj)
    raise TypeError(f"cannot serialize {type(obj)!r}")


def run_pipeline(config: AnalysisConfig) -> AnalysisResult:
    """Run the whole analysis for one configuration.

    Fits that fail for one variant only (a rank-deficient design under
    exact collinearity, or a sample too small for that variant's column
    count) are recorded in the report as errors rather than aborting the
    run, so the recommendation can still point at a single-term model.
    Errors that leave nothing to report (unreadable files, constant
    variables) propagate.
    """
    attrs = read_attributes(config.attrs_path)
    x_raw, y_raw = attrs.x_raw, attrs.y_raw
    if config.log_transform:
        x_raw, y_raw = log_transform(x_raw), log_transform(y_raw)
    x, y = zscore(x_raw), zscore(y_raw)
    n = attrs.n

    dist = parse_distances(config.dist_path, config.dist_format, attrs.ids)
    w = normalize_global(inverse_distance_contiguity(dist))

    r = corr.pearson_r(x, y)
    c = corr.spatial_correlation_matrix(x, y, w)
    lag = n * (w.w @ x.values)
    auto = n * (w.w @ y.values)
    mean_lag, mean_auto = float(lag.mean()), float(auto.mean())
    corr_lag_auto = _plain_corr(lag, auto)

    vectors = {"x": x, "y": y}
    tests = {
        name: corr.significance_by_regression(vectors[a], vectors[b], w)
        for name, a, b in _INDEX_PAIRS
    }
    perm_block = None
    if config.permutations > 0:
        perm_p = {
            name: corr.significance_by_permutation(
                vectors[a], vectors[b], w, config.permutations, config.seed,
                workers=config.workers,
            ).p_value
            for name, a, b in _INDEX_PAIRS
        }
        perm_block = {
            "permutations": config.permutations,
            "seed": config.seed,
            "p_values": perm_p,
        }

    if config.model is None:
        variants = DEFAULT_VARIANTS
    elif config.model == "ols_simple":
        variants = ("ols_simple",)
    else:
        variants = ("ols_simple", config.model)

    fits: dict[str, RegressionFit] = {}
    fit_blocks: dict[str, dict] = {}
    diag_blocks: dict[str, dict] = {}
    sigma_blocks: dict[str, float | None] = {}
    for variant in variants:
        try:
            fit = fit_model(ModelSpec(variant), x, y, w)
        except (NumericalError, InsufficientData) as exc:
            fit_blocks[variant] = {"error": str(exc), "parameters": None}
            diag_blocks[variant] = {"error": str(exc)}
            sigma_blocks[variant] = None
            continue
        fits[variant] = fit
        fit_blocks[variant] = {
            "parameters": [
                {
                    "parameter": name,
                    "value": fit.coefficients[name],
                    "std_error": fit.standard_errors[name],
                    "t_value": fit.t_values[name],
                    "p_value": fit.p_values[name],
                }
                for name in fit.names
            ],
        }
        try:
            i_e = corr.residual_moran(fit.residuals, w)
        except ZeroVariance:
            i_e = None
        diag_blocks[variant] = {
            "r2": fit.r_squared,
            "s": fit.reg_std_error,
            "f": fit.f_statistic,
            "dw": fit.durbin_watson,
            "dw_note": "residual order = input row order (heuristic)",
            "residual_moran": i_e,
        }
        sigma_blocks[variant] = residual_variance(fit)

    means = (mean_lag, mean_auto)
    theory_inp = deco.DecompositionInput(r=r, b=r, sigma_u_sq=0.0, c=c)
    theory_block, theory_checks = _decomposition_block(
        theory_inp, lambda: deco.decompose_canonical(r, c), means
    )

    empirical_block = None
    empirical_checks_pairs = None
    general = fits.get("general")
    if general is not None:
        emp_inp = deco.DecompositionInput(
            r=r, b=general.coefficients["b"], sigma_u_sq=general.sigma_u_sq, c=c
        )
        empirical_block, _ = _decomposition_block(
            emp_inp, lambda: deco.decompose_full(emp_inp), means
        )
        if empirical_block is not None and not empirical_block["singular"]:
            empirical_block["beta1_ols"] = general.coefficients["beta1"]
            empirical_block["beta2_ols"] = general.coefficients["beta2"]
        # identity table entries use the OLS coefficients themselves
        fitted_checks = deco.identity_check(
            emp_inp, general.coefficients["beta1"], general.coefficients["beta2"]
        )
        pairs = _identity_pairs(fitted_checks)
        empirical_checks_pairs = {"eq21": pairs["eq21"], "eq22": pairs["eq22"]}

    theory_pairs = None
    if theory_checks is not None:
        pairs = _identity_pairs(theory_checks)
        theory_pairs = {"eq21": pairs["eq21"], "eq24": pairs["eq24"]}

    col = deco.collinearity_q(c, corr_lag_auto)
    evidence = CorrelationEvidence(
        test_ix=tests["i_x"],
        test_iy=tests["i_y"],
        test_ixy=tests["i_xy"],
        test_iyx=tests["i_yx"],
        q=col.q,
        corr_lag_auto=corr_lag_auto,
        alpha=config.alpha,
    )
    candidates = {}
    if "sar" in fits:
        candidates["sar"] = FitQuality(
            variant="sar",
            reg_std_error=fits["sar"].reg_std_error,
            spatial_p_value=fits["sar"].p_values["beta2"],
        )
    if "slx" in fits:
        candidates["slx"] = FitQuality(
            variant="slx",
            reg_std_error=fits["slx"].reg_std_error,
            spatial_p_value=fits["slx"].p_values["beta1"],
        )
    decision = select_model(evidence, candidates or None)

    report = {
        "meta": {
            "n": n,
            "attrs": str(config.attrs_path),
            "dist": str(config.dist_path),
            "dist_format": config.dist_format,
            "log_transform": bool(config.log_transform),
            "alpha": config.alpha,
            "model": config.model,
            "seed": config.seed,
            "permutations": config.permutations,
        },
        "correlation_table": {
            "pearson_r": r,
            "indexes": {name: _test_block(tests[name]) for name, _, _ in _INDEX_PAIRS},
            "permutation": perm_block,
            "means": {"n_wx": mean_lag, "n_wy": mean_auto},
            "residual_variance": sigma_blocks,
        },
        "fits": fit_blocks,
        "diagnostics": diag_blocks,
        "identity_checks": {
            "theoretical": theory_pairs,
            "empirical": empirical_checks_pairs,
        },
        "decomposition": theory_block,
        "decomposition_empirical": empirical_block,
        "collinearity": {
            "q": col.q,
            "exact_singular": bool(col.exact_singular),
            "corr_lag_auto": corr_lag_auto,
            "practical_warning": bool(col.practical_warning),
        },
        "advice": {
            "recommended": decision.recommended,
            "rule_fired": decision.rule_fired,
            "collinearity_flag": bool(decision.collinearity_flag),
            "alpha": config.alpha,
            "rationale": decision.rationale,
        },
    }
    return AnalysisResult(
        report=_canonicalize(report),
        config=config,
        ids=attrs.ids,
        x=x,
        y=y,
        w=w,
        lag=lag,
        auto=auto,
        c=c,
        fits=fits,
        decision=decision,
    )


def render_json(report: dict) -> str:
    """Canonical machine output; keys in assembly order, stable bytes."""
    return json.dumps(report, indent=2, allow_nan=False) + "\n"


def _f4(value) -> str:
    if value is None:
        return "undef"
    if isinstance(value, str):
        return value
    return f"{value:.4f}"


def render_text(report: dict) -> str:
    """Human-oriented tables, 4 decimals, mirroring the JSON blocks present."""
    out: list[str] = []
    meta = report.get("meta", {})
    if meta:
        out.append(
            f"Spatial correlation analysis  (n={meta.get('n')}, "
            f"alpha={meta.get('alpha')}, seed={meta.get('seed')})"
        )
    ct = report.get("correlation_table")
    if ct:
        out.append("")
        out.append("Correlation statistics")
        out.append(f"  {'statistic':<12}{'value':>10}{'t':>10}{'p':>10}{'perm p':>10}")
        out.append(f"  {'R':<12}{_f4(ct['pearson_r']):>10}{'-':>10}{'-':>10}{'-':>10}")
        perm = ct.get("permutation")
        for name, block in ct["indexes"].items():
            pp = perm["p_values"][name] if perm else None
            out.append(
                f"  {name:<12}{_f4(block['statistic']):>10}"
                f"{_f4(block['t_value']):>10}{_f4(block['p_value']):>10}"
                f"{_f4(pp) if pp is not None else '-':>10}"
            )
        out.append(
            f"  means: n*Wx {_f4(ct['means']['n_wx'])}, n*Wy {_f4(ct['means']['n_wy'])}"
        )
        rv = ", ".join(f"{k}={_f4(v)}" for k, v in ct["residual_variance"].items())
        out.append(f"  residual variance: {rv}")
    fits = report.get("fits")
    if fits:
        out.append("")
        out.append("Model fits")
        diag = report.get("diagnostics", {})
        for variant, block in fits.items():
            d = diag.get(variant, {})
            if block.get("parameters") is None:
                out.append(f"  [{variant}] failed: {block.get('error')}")
                continue
            out.append(
                f"  [{variant}]  R2={_f4(d.get('r2'))}  s={_f4(d.get('s'))}  "
                f"F={_f4(d.get('f'))}  DW={_f4(d.get('dw'))}  "
                f"I_e={_f4(d.get('residual_moran'))}"
            )
            out.append(f"    {'parameter':<10}{'value':>10}{'se':>10}{'t':>10}{'p':>10}")
            for row in block["parameters"]:
                out.append(
                    f"    {row['parameter']:<10}{_f4(row['value']):>10}"
                    f"{_f4(row['std_error']):>10}{_f4(row['t_value']):>10}"
                    f"{_f4(row['p_value']):>10}"
                )
    checks = report.get("identity_checks")
    if checks:
        out.append("")
        out.append("Identity checks (left vs right)")
        th = checks.get("theoretical")
        if th:
            out.append(
                f"  theoretical: eq21 {_f4(th['eq21'][0])} vs {_f4(th['eq21'][1])}"
                f" | eq24 {_f4(th['eq24'][0])} vs {_f4(th['eq24'][1])}"
            )
        else:
            out.append("  theoretical: undef (singular system)")
        emp = checks.get("empirical")
        if emp:
            out.append(
                f"  empirical:   eq21 {_f4(emp['eq21'][0])} vs {_f4(emp['eq21'][1])}"
                f" | eq22 {_f4(emp['eq22'][0])} vs {_f4(emp['eq22'][1])}"
            )
        else:
            out.append("  empirical:   undef (no general fit)")
    for key, label in (
        ("decomposition", "Decomposition (theoretical)"),
        ("decomposition_empirical", "Decomposition (empirical)"),
    ):
        block = report.get(key)
        if block is None:
            continue
        out.append("")
        if block.get("singular"):
            out.append(f"{label}: singular (Q={_f4(block['Q'])}); coefficients undefined")
            continue
        out.append(
            f"{label}: beta1={_f4(block['beta1'])}  beta2={_f4(block['beta2'])}  "
            f"a={_f4(block['a'])}  (O={block['O']:.6g}, P={block['P']:.6g}, "
            f"Q={block['Q']:.6g})"
        )
        if "beta1_ols" in block:
            out.append(
                f"  OLS comparison: beta1={_f4(block['beta1_ols'])}  "
                f"beta2={_f4(block['beta2_ols'])}"
            )
    col = report.get("collinearity")
    if col:
        out.append("")
        out.append(
            f"Collinearity: Q={col['q']:.6g}  exact_singular={col['exact_singular']}  "
            f"corr(nWx,nWy)={_f4(col['corr_lag_auto'])}  "
            f"practical_warning={col['practical_warning']}"
        )
    advice = report.get("advice")
    if advice:
        out.append("")
        out.append(
            f"Advice: {advice['recommended']}  (rule {advice['rule_fired']}, "
            f"collinearity_flag={advice['collinearity_flag']})"
        )
        out.append(f"  {advice['rationale']}")
    return "\n".join(out) + "\n"


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, int):
        return str(value)
    return sig15(value)


def correlation_csv(report: dict) -> str:
    """Delimited form of the correlation block."""
    ct = report["correlation_table"]
    perm = ct.get("permutation")
    lines = ["statistic,value,slope_se,t_value,p_value,permutation_p"]
    lines.append(f"pearson_r,{_csv_cell(ct['pearson_r'])},,,,")
    for name, block in ct["indexes"].items():
        pp = perm["p_values"][name] if perm else None
        lines.append(
            ",".join(
                [
                    name,
                    _csv_cell(block["statistic"]),
                    _csv_cell(block["slope_se"]),
                    _csv_cell(block["t_value"]),
                    _csv_cell(block["p_value"]),
                    _csv_cell(pp),
                ]
            )
        )
    lines.append(f"mean_n_wx,{_csv_cell(ct['means']['n_wx'])},,,,")
    lines.append(f"mean_n_wy,{_csv_cell(ct['means']['n_wy'])},,,,")
    for variant, value in ct["residual_variance"].items():
        lines.append(f"residual_variance_{variant},{_csv_cell(value)},,,,")
    return "\n".join(lines) + "\n"


def fits_csv(report: dict) -> str:
    """Delimited form of the fitted coefficients."""
    lines = ["variant,parameter,value,std_error,t_value,p_value"]
    for variant, block in report["fits"].items():
        if block.get("parameters") is None:
            lines.append(f"{variant},error,,,,")
            continue
        for row in block["parameters"]:
            lines.append(
                ",".join(
                    [
                        variant,
                        row["parameter"],
                        _csv_cell(row["value"]),
                        _csv_cell(row["std_error"]),
                        _csv_cell(row["t_value"]),
                        _csv_cell(row["p_value"]),
                    ]
                )
            )
    return "\n".join(lines) + "\n"


def diagnostics_csv(report: dict) -> str:
    """Delimited form of the per-variant global diagnostics."""
    lines = ["variant,r2,s,f,dw,residual_moran"]
    for variant, block in report["diagnostics"].items():
        if "error" in block:
            lines.append(f"{variant},,,,,")
            continue
        lines.append(
            ",".join(
                [
                    variant,
                    _csv_cell(block["r2"]),
                    _csv_cell(block["s"]),
                    _csv_cell(block["f"]),
                    _csv_cell(block["dw"]),
                    _csv_cell(block["residual_moran"]),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def write_report_files(
    result: AnalysisResult, outdir: str | Path, include_figures: bool = True
) -> list[Path]:
    """Write report.json, report.txt, the delimited tables, and figures.

    Figures land in ``<outdir>/figures``; matplotlib is imported only
    when they are requested.
    """
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    for name, content in (
        ("report.json", render_json(result.report)),
        ("report.txt", render_text(result.report)),
        ("correlation.csv", correlation_csv(result.report)),
        ("fits.csv", fits_csv(result.report)),
        ("diagnostics.csv", diagnostics_csv(result.report)),
    ):
        path = outdir / name
        path.write_text(content, encoding="utf-8")
        written.append(path)
    if include_figures:
        from .figures import render_report_figures

        written.extend(render_report_figures(result, outdir / "figures"))
    return written
