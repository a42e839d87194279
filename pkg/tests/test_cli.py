import json

import numpy as np
import pytest
from click.testing import CliRunner
from PIL import Image

from cldmaps.cli import main
from cldmaps.fixtures import checkerboard, constant, two_texture_composite


@pytest.fixture
def runner():
    return CliRunner()


def write_png(path, img):
    Image.fromarray(img, mode="L").save(path)


def test_fixture_command(tmp_path, runner):
    out = tmp_path / "board.png"
    res = runner.invoke(main, [
        "fixture", "--kind", "checkerboard", "--width", "8", "--height", "8",
        "--cell", "1", "--out", str(out),
    ])
    assert res.exit_code == 0, res.output
    from cldmaps import load_gray

    assert (load_gray(out) == checkerboard(8, 8, 1)).all()


def test_analyze_collapse_threshold(tmp_path, runner):
    src = tmp_path / "b.png"
    write_png(src, checkerboard(8, 8, 1))
    res = runner.invoke(main, [
        "analyze", str(src), "--tau", "100", "--out", str(tmp_path / "out"),
    ])
    assert res.exit_code == 0, res.output
    rec = json.loads((tmp_path / "out" / "cld.json").read_text())
    assert rec["lengths"] == [1.0] * 32
    assert (tmp_path / "out" / "cld.csv").exists()
    assert (tmp_path / "out" / "smap.png").exists()
    assert not (tmp_path / "out" / "quality_curve.csv").exists()


def test_analyze_auto_writes_curve(tmp_path, runner):
    src = tmp_path / "noise.png"
    rng = np.random.default_rng(0)
    write_png(src, rng.integers(0, 256, size=(24, 24), dtype=np.uint8))
    res = runner.invoke(main, [
        "analyze", str(src), "--auto", "--grid", "16", "--out", str(tmp_path / "out"),
    ])
    assert res.exit_code == 0, res.output
    assert "tuned tau" in res.output
    curve = (tmp_path / "out" / "quality_curve.csv").read_text().splitlines()
    assert curve[0] == "tau,omega,Omega,Pi"
    assert len(curve) == 17


def test_analyze_constant_image_errors(tmp_path, runner):
    src = tmp_path / "c.png"
    write_png(src, constant(8, 8, 128))
    res = runner.invoke(main, ["analyze", str(src), "--auto", "--out", str(tmp_path)])
    assert res.exit_code != 0
    assert "tau_max" in res.output or "constant" in res.output


def test_dmap_coverage_and_files(tmp_path, runner):
    src = tmp_path / "board.png"
    write_png(src, checkerboard(64, 64, 8, lo=60, hi=195, missing_cell=(4, 3)))
    out = tmp_path / "out"
    res = runner.invoke(main, [
        "dmap", str(src), "--tau", "60", "--coverage", "80", "--out", str(out),
    ])
    assert res.exit_code == 0, res.output
    assert "tau_prime" in res.output
    table = json.loads((out / "hprime.json").read_text())
    assert table["k"] == 10
    assert (out / "dmap.png").exists()
    assert (out / "hprime.csv").exists()


def test_dmap_red_concentrates_at_anomaly(tmp_path, runner):
    cell, at = 8, (4, 3)
    src = tmp_path / "board.png"
    write_png(src, checkerboard(64, 64, cell, lo=60, hi=195, missing_cell=at))
    out = tmp_path / "out"
    res = runner.invoke(main, [
        "dmap", str(src), "--tau", "60", "--coverage", "80", "--out", str(out),
    ])
    assert res.exit_code == 0, res.output
    rgb = np.asarray(Image.open(out / "dmap.png").convert("RGB"))
    red = np.all(rgb == (255, 0, 0), axis=-1)
    cx, cy = at
    x0, y0 = (cx - 2) * cell, (cy - 2) * cell
    x1, y1 = (cx + 3) * cell, (cy + 3) * cell
    assert red.sum() > 0
    assert red[y0:y1, x0:x1].sum() / red.sum() >= 0.5


def test_dmap_bmp_on_request(tmp_path, runner):
    src = tmp_path / "b.png"
    write_png(src, checkerboard(16, 16, 1))
    out = tmp_path / "out"
    res = runner.invoke(main, [
        "dmap", str(src), "--tau", "50", "--coverage", "50",
        "--format", "bmp", "--out", str(out),
    ])
    assert res.exit_code == 0, res.output
    assert (out / "dmap.bmp").exists()
    assert not (out / "dmap.png").exists()
    assert Image.open(out / "dmap.bmp").format == "BMP"


def test_dmap_requires_target(tmp_path, runner):
    src = tmp_path / "b.png"
    write_png(src, checkerboard(8, 8, 1))
    res = runner.invoke(main, ["dmap", str(src), "--tau", "50"])
    assert res.exit_code != 0
    assert "coverage" in res.output


def test_dmap_unreachable_coverage_reports_max(tmp_path, runner):
    # tiny threshold leaves unsupported pixels, capping the coverage
    src = tmp_path / "b.png"
    rng = np.random.default_rng(0)
    write_png(src, rng.integers(0, 256, size=(8, 8), dtype=np.uint8))
    res = runner.invoke(main, [
        "dmap", str(src), "--tau", "1", "--coverage", "100", "--out", str(tmp_path / "o"),
    ])
    assert res.exit_code != 0
    assert "at most" in res.output


def test_ddmap_zero_percent_is_all_yellow(tmp_path, runner):
    src = tmp_path / "n.png"
    rng = np.random.default_rng(2)
    write_png(src, rng.integers(0, 256, size=(16, 16), dtype=np.uint8))
    out = tmp_path / "out"
    res = runner.invoke(main, [
        "ddmap", str(src), "--tau", "30", "--defect-pct", "0", "--out", str(out),
    ])
    assert res.exit_code == 0, res.output
    rgb = np.asarray(Image.open(out / "ddmap.png").convert("RGB"))
    assert not np.all(rgb == (255, 0, 0), axis=-1).any()
    assert json.loads((out / "hdoubleprime.json").read_text())["k"] == 10


def test_ddmap_max_percent_resolves_to_zero_threshold(tmp_path, runner):
    src = tmp_path / "n.png"
    rng = np.random.default_rng(2)
    write_png(src, rng.integers(0, 256, size=(16, 16), dtype=np.uint8))
    out = tmp_path / "out"
    res = runner.invoke(main, [
        "ddmap", str(src), "--tau", "30", "--defect-pct", "0", "--out", str(out),
    ])
    assert res.exit_code == 0
    rec = json.loads((out / "hdoubleprime.json").read_text())
    res = runner.invoke(main, [
        "ddmap", str(src), "--tau", "30",
        "--defect-pct", str(rec["alpha_max"]), "--out", str(out),
    ])
    assert res.exit_code == 0, res.output
    assert "tau_dprime 0.0000%" in res.output


def test_ddmap_percentage_above_max_errors(tmp_path, runner):
    src = tmp_path / "n.png"
    rng = np.random.default_rng(2)
    write_png(src, rng.integers(0, 256, size=(16, 16), dtype=np.uint8))
    res = runner.invoke(main, [
        "ddmap", str(src), "--tau", "30", "--defect-pct", "99", "--out", str(tmp_path / "o"),
    ])
    assert res.exit_code != 0
    assert "above table maximum" in res.output


def test_segment_sweep_and_report(tmp_path, runner):
    src = tmp_path / "mix.png"
    write_png(src, two_texture_composite(64, 64, 2, 8))
    out = tmp_path / "out"
    res = runner.invoke(main, [
        "segment", str(src), "--coverage", "40", "--coverage", "60",
        "--coverage", "80", "--out", str(out),
    ])
    assert res.exit_code == 0, res.output
    report = json.loads((out / "segment_report.json").read_text())
    assert len(report["maps"]) == 3
    for entry in report["maps"]:
        assert (out / entry["file"]).exists()
    at60 = next(e for e in report["maps"] if e["coverage_percent"] == 60)
    frac = at60["red_left_fraction"]
    assert max(frac, 1 - frac) >= 0.7


def test_segment_requires_coverage(tmp_path, runner):
    src = tmp_path / "b.png"
    write_png(src, checkerboard(8, 8, 1))
    res = runner.invoke(main, ["segment", str(src)])
    assert res.exit_code != 0
