"""JSON/CSV emission of diagrams, curves and tables, plus map image output."""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

import numpy as np
from PIL import Image

from .defect import SuccessTable
from .directional import DefectTable
from .engine import N_DIRECTIONS, OverallCLD
from .optimize import QualityCurve


def overall_cld_record(overall: OverallCLD) -> dict:
    """JSON-ready record {tau, lengths[32], support_counts[32]}."""
    lengths = [
        None if math.isnan(v) else v for v in overall.mean_lengths.tolist()
    ]
    return {
        "tau": overall.tau,
        "lengths": lengths,
        "support_counts": overall.support_counts.tolist(),
    }


def overall_cld_csv(overall: OverallCLD) -> str:
    """CSV with columns direction_index, angle_deg, mean_length, support_count."""
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["direction_index", "angle_deg", "mean_length", "support_count"])
    for i in range(N_DIRECTIONS):
        mean = overall.mean_lengths[i]
        writer.writerow([
            i + 1,
            repr(i * (360.0 / N_DIRECTIONS)),
            "" if math.isnan(mean) else repr(float(mean)),
            int(overall.support_counts[i]),
        ])
    return buf.getvalue()


def quality_curve_csv(curve: QualityCurve) -> str:
    """CSV with columns tau, omega, Omega, Pi."""
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["tau", "omega", "Omega", "Pi"])
    for tau, om, sup, pi in zip(
        curve.taus, curve.omega, curve.support, curve.product
    ):
        writer.writerow([repr(float(tau)), repr(float(om)), repr(float(sup)), repr(float(pi))])
    return buf.getvalue()


def quality_curve_records(curve: QualityCurve) -> list[dict]:
    return [
        {"tau": float(t), "omega": float(o), "Omega": float(s), "Pi": float(p)}
        for t, o, s, p in zip(curve.taus, curve.omega, curve.support, curve.product)
    ]


def success_table_record(table: SuccessTable) -> dict:
    """JSON-ready record {k, entries: [{alpha, tau_prime, reachable}]}."""
    entries = [
        {"alpha": a, "tau_prime": t, "reachable": ok}
        for a, t, ok in zip(table.alphas, table.tau_primes, table.reachable)
    ]
    return {"k": table.k, "attainable_max": table.attainable_max, "entries": entries}


def success_table_csv(table: SuccessTable) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["alpha", "tau_prime", "reachable"])
    for a, t, ok in zip(table.alphas, table.tau_primes, table.reachable):
        writer.writerow([repr(a), "" if t is None else repr(t), ok])
    return buf.getvalue()


def defect_table_record(table: DefectTable) -> dict:
    """JSON record {T_doubleprime, alpha_max, k, r, j_max, delta, entries}."""
    entries = [
        {"alpha": a, "tau": t} for a, t in zip(table.alphas, table.taus)
    ]
    return {
        "T_doubleprime": table.exhaustion,
        "alpha_max": table.alpha_max,
        "k": table.k,
        "r": table.r,
        "j_max": table.j_max,
        "delta": table.delta,
        "entries": entries,
    }


def defect_table_csv(table: DefectTable) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["alpha", "tau"])
    for a, t in zip(table.alphas, table.taus):
        writer.writerow([repr(a), repr(t)])
    return buf.getvalue()


def dump_json(record: dict | list, path: str | Path) -> None:
    Path(path).write_text(json.dumps(record, indent=2) + "\n")


def support_map_image(smap: np.ndarray) -> Image.Image:
    """Render the support fraction as an 8-bit grayscale image."""
    return Image.fromarray(np.rint(smap * 255.0).astype(np.uint8), mode="L")


def rgb_image(arr: np.ndarray) -> Image.Image:
    return Image.fromarray(arr, mode="RGB")


def save_image(im: Image.Image, path: str | Path) -> None:
    """Write PNG or BMP depending on the file suffix (PNG default)."""
    path = Path(path)
    fmt = "BMP" if path.suffix.lower() == ".bmp" else "PNG"
    im.save(path, format=fmt)


def image_png_bytes(im: Image.Image) -> bytes:
    buf = io.BytesIO()
    im.save(buf, format="PNG")
    return buf.getvalue()
