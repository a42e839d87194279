"""Command-line interface: analyze, dmap, ddmap, segment, fixture, serve."""

from __future__ import annotations

import os
from pathlib import Path

import click
import numpy as np

from . import defect, directional, serialize
from .errors import CLDError
from .fixtures import KINDS, SyntheticSpec, generate_fixture
from .image import load_gray
from .session import AnalysisSession
from .validation import check_tau_percent

DEFAULT_PORT = int(os.environ.get("CLDMAPS_PORT", "8000"))


@click.group()
def main():
    """Coherence-length texture analysis toolkit."""


def _session_and_tau(image_path, tau, auto, grid):
    """Load the image and resolve the saturation threshold (ratio units)."""
    session = AnalysisSession(load_gray(image_path))
    if auto or tau is None:
        result = session.optimization(grid)
        click.echo(f"tuned tau: {result.tau0 * 100.0:.4f}%")
        return session, result.tau0, result
    return session, check_tau_percent(tau), None


def _write(out: Path, name: str, text: str):
    path = out / name
    path.write_text(text)
    click.echo(f"wrote {path}")


def _write_image(out: Path, name: str, im):
    path = out / name
    serialize.save_image(im, path)
    click.echo(f"wrote {path}")


@main.command()
@click.argument("image_path", type=click.Path(exists=True))
@click.option("--tau", type=float, default=None, help="Saturation threshold in percent.")
@click.option("--auto", is_flag=True, help="Tune the threshold automatically (default when --tau is absent).")
@click.option("--grid", type=int, default=64, show_default=True, help="Tuning grid size.")
@click.option("--out", type=click.Path(file_okay=False), default=".", show_default=True)
@click.option("--format", "img_format", type=click.Choice(["png", "bmp"]), default="png", show_default=True, help="Map image format.")
def analyze(image_path, tau, auto, grid, out, img_format):
    """Compute the polar diagram and the support map."""
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    try:
        session, tau_ratio, result = _session_and_tau(image_path, tau, auto, grid)
        overall = session.overall(tau_ratio)
        smap = session.support_map(tau_ratio)
    except (CLDError, ValueError) as exc:
        raise click.ClickException(str(exc))
    serialize.dump_json(serialize.overall_cld_record(overall), out / "cld.json")
    click.echo(f"wrote {out / 'cld.json'}")
    _write(out, "cld.csv", serialize.overall_cld_csv(overall))
    _write_image(out, f"smap.{img_format}", serialize.support_map_image(smap))
    if result is not None:
        _write(out, "quality_curve.csv", serialize.quality_curve_csv(result.curve))


@main.command()
@click.argument("image_path", type=click.Path(exists=True))
@click.option("--tau", type=float, default=None, help="Saturation threshold in percent.")
@click.option("--auto", is_flag=True, help="Tune the saturation threshold first.")
@click.option("--coverage", type=float, default=None, help="Target percentage of successful (green) pixels.")
@click.option("--tau-prime", type=float, default=None, help="Explicit success tolerance in percent.")
@click.option("--k", type=int, default=10, show_default=True, help="Table subintervals.")
@click.option("--grid", type=int, default=64, show_default=True)
@click.option("--out", type=click.Path(file_okay=False), default=".", show_default=True)
@click.option("--format", "img_format", type=click.Choice(["png", "bmp"]), default="png", show_default=True, help="Map image format.")
def dmap(image_path, tau, auto, coverage, tau_prime, k, grid, out, img_format):
    """Render the defect map and its coverage table."""
    if coverage is None and tau_prime is None:
        raise click.UsageError("give --coverage or --tau-prime")
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    try:
        session, tau_ratio, _ = _session_and_tau(image_path, tau, auto, grid)
        table = session.coverage_table(tau_ratio, k)
        if tau_prime is None:
            row_alpha, tol = defect.resolve_coverage(table, coverage / 100.0)
            click.echo(
                f"coverage {coverage:.2f}% -> row {row_alpha * 100.0:.2f}% "
                f"-> tau_prime {tol * 100.0:.4f}%"
            )
        else:
            tol = tau_prime / 100.0
        dm = defect.defect_map(session.local(tau_ratio), session.overall(tau_ratio), tol)
    except (CLDError, ValueError) as exc:
        raise click.ClickException(str(exc))
    _write_image(out, f"dmap.{img_format}", serialize.rgb_image(defect.render_defect_map(dm)))
    serialize.dump_json(serialize.success_table_record(table), out / "hprime.json")
    click.echo(f"wrote {out / 'hprime.json'}")
    _write(out, "hprime.csv", serialize.success_table_csv(table))


@main.command()
@click.argument("image_path", type=click.Path(exists=True))
@click.option("--tau", type=float, default=None, help="Saturation threshold in percent.")
@click.option("--auto", is_flag=True, help="Tune the saturation threshold first.")
@click.option("--defect-pct", type=float, default=None, help="Target percentage of defective (red) pixels.")
@click.option("--tau-dprime", type=float, default=None, help="Explicit mismatch threshold in percent.")
@click.option("--k", type=int, default=10, show_default=True, help="Table subintervals.")
@click.option("--grid", type=int, default=64, show_default=True)
@click.option("--out", type=click.Path(file_okay=False), default=".", show_default=True)
@click.option("--format", "img_format", type=click.Choice(["png", "bmp"]), default="png", show_default=True, help="Map image format.")
def ddmap(image_path, tau, auto, defect_pct, tau_dprime, k, grid, out, img_format):
    """Render the directional defect map and its percentage table."""
    if defect_pct is None and tau_dprime is None:
        raise click.UsageError("give --defect-pct or --tau-dprime")
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    try:
        session, tau_ratio, _ = _session_and_tau(image_path, tau, auto, grid)
        table = session.defect_table(tau_ratio, k)
        if tau_dprime is None:
            row_alpha, tol = directional.resolve_defect_percentage(
                table, defect_pct / 100.0
            )
            click.echo(
                f"defect {defect_pct:.2f}% -> row {row_alpha * 100.0:.2f}% "
                f"-> tau_dprime {tol * 100.0:.4f}%"
            )
        else:
            tol = tau_dprime / 100.0
        rgb = directional.render_directional_map(session.directional_map(tau_ratio), tol)
    except (CLDError, ValueError) as exc:
        raise click.ClickException(str(exc))
    _write_image(out, f"ddmap.{img_format}", serialize.rgb_image(rgb))
    serialize.dump_json(serialize.defect_table_record(table), out / "hdoubleprime.json")
    click.echo(f"wrote {out / 'hdoubleprime.json'}")
    _write(out, "hdoubleprime.csv", serialize.defect_table_csv(table))


@main.command()
@click.argument("image_path", type=click.Path(exists=True))
@click.option("--coverage", "coverages", type=float, multiple=True, required=True,
              help="Coverage percentage; repeat for a sweep.")
@click.option("--k", type=int, default=10, show_default=True)
@click.option("--grid", type=int, default=64, show_default=True)
@click.option("--out", type=click.Path(file_okay=False), default=".", show_default=True)
@click.option("--format", "img_format", type=click.Choice(["png", "bmp"]), default="png", show_default=True, help="Map image format.")
def segment(image_path, coverages, k, grid, out, img_format):
    """Auto-tune, then emit one defect map per coverage percentage.

    Reports the defective-pixel split between the left and right image
    halves, which segments a two-texture composite.
    """
    if not coverages:
        raise click.UsageError("at least one --coverage value is required")
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    try:
        session, tau_ratio, _ = _session_and_tau(image_path, None, True, grid)
        table = session.coverage_table(tau_ratio, k)
        report = {"tau_percent": tau_ratio * 100.0, "maps": []}
        for coverage in coverages:
            row_alpha, tol = defect.resolve_coverage(table, coverage / 100.0)
            dm = defect.defect_map(
                session.local(tau_ratio), session.overall(tau_ratio), tol
            )
            rgb = defect.render_defect_map(dm)
            name = f"dmap_{coverage:g}.{img_format}"
            _write_image(out, name, serialize.rgb_image(rgb))
            red = np.all(rgb == defect.RED, axis=-1)
            half = red.shape[1] // 2
            left = int(red[:, :half].sum())
            right = int(red[:, half:].sum())
            total = left + right
            report["maps"].append({
                "coverage_percent": coverage,
                "row_percent": row_alpha * 100.0,
                "tau_prime_percent": tol * 100.0,
                "file": name,
                "red_pixels": total,
                "red_left": left,
                "red_right": right,
                "red_left_fraction": left / total if total else None,
            })
    except (CLDError, ValueError) as exc:
        raise click.ClickException(str(exc))
    serialize.dump_json(report, out / "segment_report.json")
    click.echo(f"wrote {out / 'segment_report.json'}")


@main.command()
@click.option("--kind", type=click.Choice(KINDS), required=True)
@click.option("--width", type=int, default=64, show_default=True)
@click.option("--height", type=int, default=64, show_default=True)
@click.option("--cell", type=int, default=2, show_default=True)
@click.option("--cell-right", type=int, default=8, show_default=True)
@click.option("--value", type=int, default=128, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--missing-cell", type=str, default=None,
              help="Checkerboard cell 'cx,cy' to blank out.")
@click.option("--out", type=click.Path(dir_okay=False), required=True)
def fixture(kind, width, height, cell, cell_right, value, seed, missing_cell, out):
    """Write a deterministic synthetic texture image."""
    missing = None
    if missing_cell:
        cx, cy = (int(v) for v in missing_cell.split(","))
        missing = (cx, cy)
    try:
        img = generate_fixture(SyntheticSpec(
            kind=kind, width=width, height=height, cell=cell,
            cell_right=cell_right, value=value, seed=seed, missing_cell=missing,
        ))
    except (CLDError, ValueError) as exc:
        raise click.ClickException(str(exc))
    from PIL import Image

    serialize.save_image(Image.fromarray(img, mode="L"), out)
    click.echo(f"wrote {out}")


@main.command()
@click.option("--port", type=int, default=DEFAULT_PORT, show_default=True,
              help="Listen port (env CLDMAPS_PORT overrides the default).")
@click.option("--host", type=str, default="127.0.0.1", show_default=True)
def serve(port, host):
    """Run the HTTP analysis service."""
    from .service import serve as run_service

    click.echo(f"serving on http://{host}:{port}")
    run_service(port=port, host=host)


if __name__ == "__main__":
    main()
