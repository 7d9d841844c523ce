"""Shared fixtures and the acceptance-gate terminal summary.

The summary hook prints one PASS/FAIL line per acceptance test after the
run, regardless of pytest's output capturing, so the gate's verdict is
always visible in plain `pytest -v` output.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from spacereg import (
    DistanceMatrix,
    SpatialWeightMatrix,
    StandardizedVector,
    inverse_distance_contiguity,
    normalize_global,
    zscore,
)

DATA_DIR = Path(__file__).resolve().parent.parent / "data"

_acceptance_results: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _acceptance_results[report.nodeid] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.write_sep("-", "acceptance gate")
    for nodeid, outcome in _acceptance_results.items():
        label = nodeid.split("::")[-1]
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{verdict} {label}")


@pytest.fixture
def demo_attrs() -> Path:
    return DATA_DIR / "demo_attrs.csv"


@pytest.fixture
def demo_distances() -> Path:
    return DATA_DIR / "demo_distances.csv"


@pytest.fixture
def demo_distances_long() -> Path:
    return DATA_DIR / "demo_distances_long.csv"


def random_weight_matrix(rng: np.random.Generator, n: int) -> SpatialWeightMatrix:
    """W from uniformly scattered points with a minimum separation."""
    while True:
        pts = rng.uniform(0.0, 100.0, (n, 2))
        d = np.sqrt(((pts[:, None, :] - pts[None, :, :]) ** 2).sum(-1))
        if d[~np.eye(n, dtype=bool)].min() > 1e-3:
            break
    return normalize_global(inverse_distance_contiguity(DistanceMatrix(d)))


def random_standardized_pair(
    rng: np.random.Generator, n: int, rho: float = 0.8
) -> tuple[StandardizedVector, StandardizedVector]:
    """Correlated standardized x, y with correlation near rho."""
    x_raw = rng.normal(0.0, 1.0, n)
    y_raw = rho * x_raw + np.sqrt(max(1.0 - rho * rho, 1e-6)) * rng.normal(0.0, 1.0, n)
    return zscore(x_raw), zscore(y_raw)


@pytest.fixture
def equal_weights_4() -> SpatialWeightMatrix:
    w = np.full((4, 4), 1.0 / 12.0)
    np.fill_diagonal(w, 0.0)
    return SpatialWeightMatrix(w)
