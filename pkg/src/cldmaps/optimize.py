"""Saturation-threshold tuning via the unbiased quality product.

Two indexes summarize the diagram at a threshold tau: the average
diagram length (largest at small tau, where long walks are needed to
saturate) and the supported surface fraction (largest at big tau,
where every walk saturates immediately).  Their unbiased product

    product(tau) = (support(tau) - support_min) * (length(tau) - length_min)

vanishes at both ends of the threshold range and peaks at an interior
tau, which is the tuned saturation threshold.  Minima are taken over a
uniform evaluation grid on (0, tau_max]; the grid argmax is then
refined by golden-section search between its two grid neighbours.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .engine import (
    LengthProfile,
    mean_diagram_length,
    overall_cld,
    support_fraction,
    support_map,
)
from .errors import DegenerateCurveError, DegenerateImageError, NoSupportError
from .image import ImageStats

DEFAULT_GRID_SIZE = 64
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class QualityCurve:
    """Quality indexes sampled on a threshold grid.

    `taus` is strictly increasing with last point tau_max.  `omega` is
    the average diagram length, `support` the supported surface
    fraction, `product` their unbiased product built from the grid
    minima `omega_min` / `support_min`.
    """

    taus: np.ndarray
    omega: np.ndarray
    support: np.ndarray
    product: np.ndarray
    omega_min: float
    support_min: float


@dataclass(frozen=True)
class OptimizationResult:
    tau0: float
    pi_at_tau0: float
    curve: QualityCurve


def evaluate_indexes(profile: LengthProfile, tau: float) -> tuple[float, float]:
    """(average diagram length, supported fraction) at one threshold.

    A threshold so small that no direction is supported yields length
    0, consistent with empty directions contributing nothing.
    """
    local = profile.lengths_at(tau)
    try:
        omega = mean_diagram_length(overall_cld(local, tau))
    except NoSupportError:
        omega = 0.0
    return omega, support_fraction(support_map(local))


def quality_product(
    omega_vals: np.ndarray, support_vals: np.ndarray
) -> tuple[np.ndarray, float, float]:
    """Unbiased product per grid point, plus the grid minima used."""
    omega_vals = np.asarray(omega_vals, dtype=np.float64)
    support_vals = np.asarray(support_vals, dtype=np.float64)
    if omega_vals.size == 0:
        raise ValueError("empty evaluation grid")
    omega_min = float(omega_vals.min())
    support_min = float(support_vals.min())
    product = (support_vals - support_min) * (omega_vals - omega_min)
    return product, omega_min, support_min


def threshold_grid(tau_max: float, grid_size: int) -> np.ndarray:
    """Uniform grid of grid_size points over (0, tau_max], last == tau_max."""
    return tau_max * (np.arange(1, grid_size + 1, dtype=np.float64) / grid_size)


def quality_curve(
    img: np.ndarray,
    stats: ImageStats,
    grid_size: int = DEFAULT_GRID_SIZE,
    profile: LengthProfile | None = None,
) -> QualityCurve:
    """Evaluate both indexes and their product on the threshold grid."""
    if grid_size < 8:
        raise ValueError("grid_size must be at least 8")
    if stats.tau_max <= 0.0:
        raise DegenerateImageError("constant image: tau_max is 0")
    if profile is None:
        profile = LengthProfile.from_image(img, stats)
    taus = threshold_grid(stats.tau_max, grid_size)
    omega = np.empty(grid_size)
    support = np.empty(grid_size)
    for j, tau in enumerate(taus):
        omega[j], support[j] = evaluate_indexes(profile, float(tau))
    product, omega_min, support_min = quality_product(omega, support)
    return QualityCurve(
        taus=taus,
        omega=omega,
        support=support,
        product=product,
        omega_min=omega_min,
        support_min=support_min,
    )


def _golden_refine(f, lo: float, hi: float, tol: float) -> list[tuple[float, float]]:
    """Golden-section maximization probes on [lo, hi]; ties move left."""
    probes: list[tuple[float, float]] = []
    span = hi - lo
    c = hi - _INVPHI * span
    d = lo + _INVPHI * span
    fc, fd = f(c), f(d)
    probes.append((c, fc))
    probes.append((d, fd))
    while hi - lo > tol:
        if fc >= fd:
            hi, d, fd = d, c, fc
            c = hi - _INVPHI * (hi - lo)
            fc = f(c)
            probes.append((c, fc))
        else:
            lo, c, fc = c, d, fd
            d = lo + _INVPHI * (hi - lo)
            fd = f(d)
            probes.append((d, fd))
    return probes


def optimize_tau(
    img: np.ndarray,
    stats: ImageStats,
    grid_size: int = DEFAULT_GRID_SIZE,
    profile: LengthProfile | None = None,
) -> OptimizationResult:
    """Find the threshold maximizing the quality product.

    Grid evaluation first, then golden-section refinement (tolerance
    1e-4 * tau_max) inside the bracket formed by the grid argmax and
    its two neighbours.  The product at probe thresholds reuses the
    grid minima.  Ties resolve toward the smaller threshold.

    Raises
    ------
    DegenerateCurveError
        If the product is identically zero on the grid; the error
        carries tau_max / 2 as a fallback threshold.
    """
    if profile is None:
        profile = LengthProfile.from_image(img, stats)
    curve = quality_curve(img, stats, grid_size, profile=profile)
    if not (curve.product > 0.0).any():
        raise DegenerateCurveError(
            "quality product vanishes on the whole grid; "
            "optimization cannot pick a threshold",
            fallback_tau=stats.tau_max / 2.0,
        )

    best_j = int(np.argmax(curve.product))  # argmax returns the first = smallest tau
    lo = float(curve.taus[best_j - 1]) if best_j > 0 else float(curve.taus[0])
    hi = (
        float(curve.taus[best_j + 1])
        if best_j < grid_size - 1
        else float(curve.taus[-1])
    )

    def product_at(tau: float) -> float:
        omega, support = evaluate_indexes(profile, tau)
        return (support - curve.support_min) * (omega - curve.omega_min)

    candidates = [(float(curve.taus[best_j]), float(curve.product[best_j]))]
    if hi > lo:
        candidates.extend(_golden_refine(product_at, lo, hi, 1e-4 * stats.tau_max))
    best_tau, best_pi = min(candidates, key=lambda tp: (-tp[1], tp[0]))
    return OptimizationResult(tau0=best_tau, pi_at_tau0=best_pi, curve=curve)
