"""Diagnostic figures for the report path.

Rendering is file-only (Agg backend, set on import) and deterministic:
fixed sizes, no timestamps, data-driven content only, so repeated runs
of the same analysis produce byte-identical image files.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .report import AnalysisResult


def moran_scatter(ax, z: np.ndarray, lagged: np.ndarray, index_value: float, label: str) -> None:
    """Scatter of a variable against its spatial lag, with the index line.

    The fitted line's slope through the standardized cloud is the
    correlation index itself, so the plot reads as a visual test of it.
    """
    ax.scatter(z, lagged, s=28, color="#1f6fb2", edgecolor="white", linewidth=0.5, zorder=3)
    ax.axhline(0.0, color="0.75", linewidth=0.8, zorder=1)
    ax.axvline(0.0, color="0.75", linewidth=0.8, zorder=1)
    xs = np.array([z.min(), z.max()])
    intercept = lagged.mean() - index_value * z.mean()
    ax.plot(xs, intercept + index_value * xs, color="#b23a1f", linewidth=1.4, zorder=2)
    ax.set_xlabel(f"{label} (standardized)")
    ax.set_ylabel(f"n·W{label}")
    ax.set_title(f"Spatial lag of {label}: index = {index_value:.4f}")


def collinearity_scatter(ax, lag: np.ndarray, auto: np.ndarray, corr_value: float) -> None:
    """nWx against nWy; near-linear clouds flag term collinearity."""
    ax.scatter(lag, auto, s=28, color="#4a7c2f", edgecolor="white", linewidth=0.5, zorder=3)
    ax.set_xlabel("n·Wx (lag term)")
    ax.set_ylabel("n·Wy (autoregressive term)")
    ax.set_title(f"Spatial terms: corr = {corr_value:.4f}")


def fit_panels(axes, fitted: np.ndarray, observed: np.ndarray, residuals: np.ndarray,
               variant: str) -> None:
    """Observed-vs-fitted and residual panels for one model variant."""
    ax_fit, ax_res = axes
    lo = min(float(observed.min()), float(fitted.min()))
    hi = max(float(observed.max()), float(fitted.max()))
    ax_fit.plot([lo, hi], [lo, hi], color="0.6", linewidth=0.9, zorder=1)
    ax_fit.scatter(fitted, observed, s=28, color="#1f6fb2", edgecolor="white",
                   linewidth=0.5, zorder=3)
    ax_fit.set_xlabel("fitted")
    ax_fit.set_ylabel("observed")
    ax_fit.set_title(f"{variant}: observed vs fitted")

    idx = np.arange(residuals.size)
    ax_res.axhline(0.0, color="0.6", linewidth=0.9, zorder=1)
    ax_res.vlines(idx, 0.0, residuals, color="#b23a1f", linewidth=1.2, zorder=2)
    ax_res.scatter(idx, residuals, s=16, color="#b23a1f", zorder=3)
    ax_res.set_xlabel("unit (input order)")
    ax_res.set_ylabel("residual")
    ax_res.set_title(f"{variant}: residuals")


def render_report_figures(result: AnalysisResult, fig_dir: str | Path) -> list[Path]:
    """Write the report's figures; returns the paths written."""
    fig_dir = Path(fig_dir)
    fig_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    ct = result.report["correlation_table"]

    for name, label, z, lagged, key in (
        ("moran_x.png", "x", result.x.values, result.lag, "i_x"),
        ("moran_y.png", "y", result.y.values, result.auto, "i_y"),
    ):
        fig, ax = plt.subplots(figsize=(5.4, 4.2), constrained_layout=True)
        moran_scatter(ax, z, lagged, ct["indexes"][key]["statistic"], label)
        path = fig_dir / name
        fig.savefig(path)
        plt.close(fig)
        written.append(path)

    fig, ax = plt.subplots(figsize=(5.4, 4.2), constrained_layout=True)
    collinearity_scatter(
        ax, result.lag, result.auto, result.report["collinearity"]["corr_lag_auto"]
    )
    path = fig_dir / "collinearity.png"
    fig.savefig(path)
    plt.close(fig)
    written.append(path)

    for variant, fit in result.fits.items():
        fig, axes = plt.subplots(1, 2, figsize=(9.6, 4.2), constrained_layout=True)
        fit_panels(axes, fit.fitted, fit.response, fit.residuals, variant)
        path = fig_dir / f"fit_{variant}.png"
        fig.savefig(path)
        plt.close(fig)
        written.append(path)
    return written
