"""Figure rendering: files, determinism, and the opt-out."""

from spacereg import AnalysisConfig, run_pipeline
from spacereg.figures import render_report_figures
from spacereg.report import write_report_files

ATTRS4 = "id,x,y\np,1,2\nq,2,1\nr,3,4\ns,4,3\n"
DIST4 = "id,p,q,r,s\np,0,1,2,3\nq,1,0,1,2\nr,2,1,0,1\ns,3,2,1,0\n"


def result4(tmp_path):
    a = tmp_path / "attrs.csv"
    d = tmp_path / "dist.csv"
    a.write_text(ATTRS4, encoding="utf-8")
    d.write_text(DIST4, encoding="utf-8")
    return run_pipeline(
        AnalysisConfig(attrs_path=str(a), dist_path=str(d), permutations=0)
    )


def test_figures_cover_every_fitted_variant(tmp_path):
    result = result4(tmp_path)
    paths = render_report_figures(result, tmp_path / "figs")
    names = sorted(p.name for p in paths)
    expected = sorted(
        ["moran_x.png", "moran_y.png", "collinearity.png"]
        + [f"fit_{v}.png" for v in result.fits]
    )
    assert names == expected
    for p in paths:
        data = p.read_bytes()
        assert data[:8] == b"\x89PNG\r\n\x1a\n" and len(data) > 1000


def test_figure_bytes_are_deterministic(tmp_path):
    result = result4(tmp_path)
    first = render_report_figures(result, tmp_path / "f1")
    second = render_report_figures(result, tmp_path / "f2")
    for a, b in zip(sorted(first), sorted(second)):
        assert a.read_bytes() == b.read_bytes()


def test_write_report_files_with_and_without_figures(tmp_path):
    result = result4(tmp_path)
    with_figs = write_report_files(result, tmp_path / "out1")
    names = {p.name for p in with_figs}
    assert {
        "report.json", "report.txt", "correlation.csv", "fits.csv", "diagnostics.csv"
    } <= names
    assert (tmp_path / "out1" / "figures").is_dir()
    without = write_report_files(result, tmp_path / "out2", include_figures=False)
    assert all("figures" not in str(p) for p in without)
    assert not (tmp_path / "out2" / "figures").exists()
