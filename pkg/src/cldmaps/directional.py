"""Directional defect map: shape mismatch of local diagrams to the overall one.

Each pixel's mismatch score is the mean squared relative deviation of
its local lengths from the direction means, taken over the counted
directions.  A pixel is defective at threshold tau_dprime when its
score exceeds (1 + tau_dprime) times the image-mean score, i.e. when
its excess ratio (score - mean) / mean is strictly above tau_dprime.
The defective fraction is non-increasing in the threshold, reaching 0
exactly at the exhaustion threshold (the largest excess ratio) and its
maximum at threshold 0.

The percentage table works on integer percents: the attainable maximum
is rounded up to a whole percent, the partition arithmetic splits it
into regularly spaced interior rows, and each row's threshold is found
by bisection on the excess-ratio axis, snapped to one float below the
step at which the defective fraction would drop under the row target.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .engine import OverallCLD
from .errors import EmptyPartitionError, NoSupportError, UnreachablePercentageError
from .defect import length_ratios

BISECTION_TOL = 1e-9
_CEIL_EPS = 1e-9  # absorbs float dust when converting ratios to whole percents

YELLOW = (255, 255, 0)
RED = (255, 0, 0)


@dataclass(frozen=True)
class DirectionalDefectMap:
    """Mismatch scores plus the derived excess ratios.

    `values` holds the per-pixel scores (NaN where no direction
    counts), `mean_mismatch` their mean over the defined pixels and
    `excess` the ratios (value - mean) / mean used for classification.
    `degenerate` flags an all-equal field (mean 0), for which the
    defective fraction is identically 0.
    """

    values: np.ndarray  # (h, w) float64, NaN unsupported
    mean_mismatch: float
    excess: np.ndarray  # (h, w) float64, NaN unsupported or degenerate
    degenerate: bool


@dataclass(frozen=True)
class PartitionParams:
    alpha_max: int  # attainable defective percentage, rounded up
    r: int  # alpha_max mod k
    j_max: int  # number of interior table rows
    delta: float  # row spacing on the fraction axis


@dataclass(frozen=True)
class DefectTable:
    """Defect-percentage table.

    `alphas` / `taus` list the rows in increasing percentage order:
    the endpoint (0, exhaustion threshold), the interior rows
    j * delta for j = 1..j_max, and the endpoint (alpha_max/100, 0).
    """

    exhaustion: float
    alpha_max_ratio: float
    alpha_max: int
    k: int
    r: int
    j_max: int
    delta: float
    alphas: list[float]
    taus: list[float]


def shape_mismatch(
    local: np.ndarray, overall: OverallCLD, x: int, y: int
) -> float | None:
    """Mismatch score of one pixel, or None when no direction counts."""
    lengths = local[:, y, x]
    means = overall.mean_lengths
    counted = (lengths > 0) & ~np.isnan(means)
    c = int(np.count_nonzero(counted))
    if c == 0:
        return None
    rel = (lengths[counted].astype(np.float64) - means[counted]) / means[counted]
    return float((rel * rel).sum() / c)


def directional_defect_map(
    local: np.ndarray, overall: OverallCLD
) -> DirectionalDefectMap:
    """Mismatch scores for every pixel."""
    ratios = length_ratios(local, overall)
    counted = ~np.isnan(ratios)
    c = counted.sum(axis=0)
    sq = np.where(counted, ratios * ratios, 0.0)
    with np.errstate(invalid="ignore"):
        values = np.where(c > 0, sq.sum(axis=0) / np.maximum(c, 1), np.nan)
    defined = values[~np.isnan(values)]
    if defined.size == 0:
        return DirectionalDefectMap(
            values=values, mean_mismatch=float("nan"),
            excess=np.full_like(values, np.nan), degenerate=True,
        )
    mean = float(defined.mean())
    if mean == 0.0:
        return DirectionalDefectMap(
            values=values, mean_mismatch=0.0,
            excess=np.full_like(values, np.nan), degenerate=True,
        )
    with np.errstate(invalid="ignore"):
        excess = (values - mean) / mean
    return DirectionalDefectMap(
        values=values, mean_mismatch=mean, excess=excess, degenerate=False
    )


def defect_fraction(ddmap: DirectionalDefectMap, tau_dprime: float) -> float:
    """Fraction of all pixels defective at the threshold."""
    if tau_dprime < 0.0:
        raise ValueError("tau_dprime must be >= 0")
    with np.errstate(invalid="ignore"):
        count = int(np.count_nonzero(ddmap.excess > tau_dprime))
    return count / ddmap.excess.size


def exhaustion_threshold(ddmap: DirectionalDefectMap) -> float:
    """Smallest threshold at which no pixel is defective."""
    defined = ddmap.values[~np.isnan(ddmap.values)]
    if defined.size == 0:
        raise NoSupportError("no pixel has a computable mismatch score")
    if ddmap.degenerate:
        return 0.0
    return max(float(np.nanmax(ddmap.excess)), 0.0)


def partition_params(alpha_max_ratio: float, k: int) -> PartitionParams:
    """Integer-percent partition of the attainable defective range."""
    if k < 3:
        raise ValueError("k must be >= 3")
    if alpha_max_ratio <= 0.0:
        raise EmptyPartitionError(
            "no pixel is defective at any threshold; nothing to partition"
        )
    alpha_max = max(1, math.ceil(100.0 * alpha_max_ratio - _CEIL_EPS))
    r = alpha_max % k
    j_max = k - 2 if r == 0 else k - 1
    delta = alpha_max / (100.0 * j_max)
    return PartitionParams(alpha_max=alpha_max, r=r, j_max=j_max, delta=delta)


def defect_table(ddmap: DirectionalDefectMap, k: int) -> DefectTable:
    """Percentage-to-threshold table for the defective fraction.

    Interior row j targets the fraction j * delta; its threshold is the
    smallest one still reaching that defective fraction, located by
    bisection on [0, exhaustion] and snapped to one float below the
    excess-ratio step where classification would lose the target.
    Rows whose target exceeds the attainable fraction (the whole-percent
    round-up can overshoot it) fall back to threshold 0.
    """
    n_px = ddmap.excess.size
    alpha_max_ratio = defect_fraction(ddmap, 0.0)
    params = partition_params(alpha_max_ratio, k)
    t_end = exhaustion_threshold(ddmap)
    sorted_excess = np.sort(ddmap.excess[~np.isnan(ddmap.excess)])

    def fraction_at(t: float) -> float:
        count = sorted_excess.size - int(
            np.searchsorted(sorted_excess, t, side="right")
        )
        return count / n_px

    alphas = [0.0]
    taus = [t_end]
    for j in range(1, params.j_max + 1):
        target = j * params.delta
        tau_j = _row_threshold(sorted_excess, fraction_at, target, t_end)
        alphas.append(target)
        taus.append(tau_j)
    alphas.append(params.alpha_max / 100.0)
    taus.append(0.0)
    return DefectTable(
        exhaustion=t_end,
        alpha_max_ratio=alpha_max_ratio,
        alpha_max=params.alpha_max,
        k=k,
        r=params.r,
        j_max=params.j_max,
        delta=params.delta,
        alphas=alphas,
        taus=taus,
    )


def _row_threshold(sorted_excess, fraction_at, target: float, t_end: float) -> float:
    if fraction_at(0.0) < target:
        return 0.0  # round-up overshoot: best effort is threshold 0
    if fraction_at(t_end) >= target:
        return t_end
    lo, hi = 0.0, t_end
    while hi - lo > BISECTION_TOL:
        mid = 0.5 * (lo + hi)
        if fraction_at(mid) >= target:
            lo = mid
        else:
            hi = mid
    # the fraction is piecewise constant: locate the exact step in the
    # bracket where it drops below the target, answer one float below it
    left = int(np.searchsorted(sorted_excess, lo, side="right"))
    right = int(np.searchsorted(sorted_excess, hi, side="right"))
    for step in sorted(set(float(v) for v in sorted_excess[left:right])):
        if fraction_at(step) < target:
            return float(np.nextafter(step, -np.inf))
    return float(np.nextafter(hi, -np.inf))


def resolve_defect_percentage(table: DefectTable, fraction: float) -> tuple[float, float]:
    """Threshold for a requested defective fraction in [0, alpha_max/100].

    Picks the first table row with percentage >= the request; returns
    (row fraction, threshold).
    """
    if fraction < 0.0:
        raise ValueError("defect fraction must be >= 0")
    if fraction > table.alpha_max / 100.0:
        raise UnreachablePercentageError(
            f"defect percentage {100.0 * fraction:.2f} above table maximum "
            f"{table.alpha_max}",
            alpha_max=table.alpha_max,
        )
    best = min(a for a in table.alphas if a >= fraction)
    # the last interior row shares its percentage with the (alpha_max, 0)
    # endpoint; the endpoint wins, so the maximum request maps to 0
    idx = max(i for i, a in enumerate(table.alphas) if a == best)
    return table.alphas[idx], table.taus[idx]


def classify_defective(ddmap: DirectionalDefectMap, tau_dprime: float) -> np.ndarray:
    """Boolean map of defective pixels at the threshold."""
    if tau_dprime < 0.0:
        raise ValueError("tau_dprime must be >= 0")
    with np.errstate(invalid="ignore"):
        return ddmap.excess > tau_dprime


def render_directional_map(
    ddmap: DirectionalDefectMap, tau_dprime: float
) -> np.ndarray:
    """RGB rendering: conforming yellow, defective red, unsupported black."""
    h, w = ddmap.values.shape
    out = np.zeros((h, w, 3), dtype=np.uint8)
    supported = ~np.isnan(ddmap.values)
    defective = classify_defective(ddmap, tau_dprime)
    out[supported & ~defective] = YELLOW
    out[defective] = RED
    return out
