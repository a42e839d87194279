"""Defect map: per-pixel majority vote of local lengths against the diagram.

A direction counts at a pixel when both the local coherence length and
the direction's diagram mean exist.  The direction is successful at
tolerance tau_prime when the relative deviation

    |l_i(x, y) - mean_i| / mean_i <= tau_prime

holds.  The vote score is 2*s/c - 1 over the c counted directions with
s successes: -1 when every direction is defective, +1 at the pixel's
maximum deviation, piecewise constant and non-decreasing in between.
The first tolerance with a positive score is the pixel's success
threshold; its distribution over the image drives the coverage
percentage table.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .engine import OverallCLD
from .errors import EmptyTableError, UnreachableCoverageError

BISECTION_TOL = 1e-9

GREEN = (0, 255, 0)
RED = (255, 0, 0)
BLACK = (0, 0, 0)


@dataclass(frozen=True)
class DefectMap:
    """Vote scores at one tolerance; NaN marks unsupported pixels."""

    tau_prime: float
    values: np.ndarray  # (h, w) float64 in [-1, 1], NaN unsupported


@dataclass(frozen=True)
class SuccessProfile:
    """Per-pixel success thresholds and deviation bounds.

    `first_success[y, x]` is the smallest tolerance at which the
    pixel's vote turns positive, `max_deviation_point[y, x]` the
    largest relative deviation over its counted directions (both NaN
    for pixels with no counted direction).  `sorted_first_success`
    caches the defined first-success values in ascending order.
    """

    first_success: np.ndarray
    max_deviation_point: np.ndarray
    max_deviation: float
    sorted_first_success: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return self.first_success.shape


@dataclass(frozen=True)
class SuccessTable:
    """Coverage table: row j maps percentage alphas[j] = j/k to the
    smallest tolerance reaching that coverage of successful pixels.

    Rows beyond the attainable coverage carry tau_primes[j] None and
    reachable[j] False.
    """

    k: int
    alphas: list[float]
    tau_primes: list[float | None]
    reachable: list[bool]
    attainable_max: float


def length_ratios(local: np.ndarray, overall: OverallCLD) -> np.ndarray:
    """Relative length deviations, (32, h, w) float64.

    NaN where the local length is absent or the direction mean is
    undefined; those directions never count in a vote.
    """
    lengths = local.astype(np.float64)
    means = overall.mean_lengths[:, None, None]
    with np.errstate(invalid="ignore"):
        ratios = np.abs(lengths - means) / means
    ratios[local == 0] = np.nan
    return ratios


def success_balance(
    local: np.ndarray, overall: OverallCLD, x: int, y: int, tau_prime: float
) -> float | None:
    """Vote score 2*s/c - 1 at one pixel, or None when nothing counts."""
    if tau_prime < 0.0:
        raise ValueError("tau_prime must be >= 0")
    col = _counted_column(local, overall, x, y)
    c = col.size
    if c == 0:
        return None
    s = int(np.count_nonzero(col <= tau_prime))
    return 2.0 * s / c - 1.0


def max_length_deviation(
    local: np.ndarray, overall: OverallCLD, x: int, y: int
) -> float | None:
    """Largest relative deviation at one pixel (the tolerance at which
    its vote reaches +1), or None when no direction counts."""
    col = _counted_column(local, overall, x, y)
    if col.size == 0:
        return None
    return float(col.max())


def first_success_threshold(
    local: np.ndarray, overall: OverallCLD, x: int, y: int
) -> float | None:
    """Smallest tolerance with a positive vote at one pixel.

    Bisection over [0, max deviation] exploiting that the vote is
    piecewise constant and non-decreasing; the bracket is closed by
    snapping to the smallest per-direction deviation inside it.
    Returns None for pixels with no counted direction.
    """
    col = _counted_column(local, overall, x, y)
    c = col.size
    if c == 0:
        return None

    def positive(t: float) -> bool:
        return 2.0 * int(np.count_nonzero(col <= t)) / c - 1.0 > 0.0

    if positive(0.0):
        return 0.0
    lo = 0.0
    hi = float(col.max())
    while hi - lo > BISECTION_TOL:
        mid = 0.5 * (lo + hi)
        if positive(mid):
            hi = mid
        else:
            lo = mid
    for step in sorted({float(r) for r in col if lo < r <= hi}):
        if positive(step):
            return step
    return hi


def _counted_column(
    local: np.ndarray, overall: OverallCLD, x: int, y: int
) -> np.ndarray:
    lengths = local[:, y, x]
    means = overall.mean_lengths
    counted = (lengths > 0) & ~np.isnan(means)
    return np.abs(lengths[counted].astype(np.float64) - means[counted]) / means[counted]


def defect_map(
    local: np.ndarray, overall: OverallCLD, tau_prime: float
) -> DefectMap:
    """Vote scores for every pixel at one tolerance."""
    if tau_prime < 0.0:
        raise ValueError("tau_prime must be >= 0")
    ratios = length_ratios(local, overall)
    counted = ~np.isnan(ratios)
    c = counted.sum(axis=0)
    with np.errstate(invalid="ignore"):
        s = (ratios <= tau_prime).sum(axis=0)
        values = np.where(c > 0, 2.0 * s / np.maximum(c, 1) - 1.0, np.nan)
    return DefectMap(tau_prime=tau_prime, values=values)


def success_profile(local: np.ndarray, overall: OverallCLD) -> SuccessProfile:
    """First-success thresholds for all pixels at once.

    Uses the order-statistic form: with c counted directions the vote
    first turns positive once s = c//2 + 1 directions succeed, so the
    threshold is the s-th smallest deviation.  Must agree with the
    per-pixel bisection within the bisection tolerance.
    """
    ratios = length_ratios(local, overall)
    c = (~np.isnan(ratios)).sum(axis=0)
    sortd = np.sort(ratios, axis=0)  # NaN sort last
    need = np.where(c > 0, c // 2 + 1, 1)
    first = np.take_along_axis(sortd, (need - 1)[None, :, :], axis=0)[0]
    maxdev = np.take_along_axis(sortd, np.maximum(c - 1, 0)[None, :, :], axis=0)[0]
    unsupported = c == 0
    first = np.where(unsupported, np.nan, first)
    maxdev = np.where(unsupported, np.nan, maxdev)
    defined = first[~np.isnan(first)]
    return SuccessProfile(
        first_success=first,
        max_deviation_point=maxdev,
        max_deviation=float(maxdev[~np.isnan(maxdev)].max()) if defined.size else float("nan"),
        sorted_first_success=np.sort(defined),
    )


def success_fraction(profile: SuccessProfile, tau_prime: float) -> float:
    """Fraction of all pixels whose vote is positive at the tolerance."""
    if tau_prime < 0.0:
        raise ValueError("tau_prime must be >= 0")
    h, w = profile.shape
    hits = int(np.searchsorted(profile.sorted_first_success, tau_prime, side="right"))
    return hits / (h * w)


def coverage_table(profile: SuccessProfile, k: int) -> SuccessTable:
    """Percentage-to-tolerance table with k subintervals.

    Row j (coverage j/k) stores the ceil(j*h*w/k)-th smallest defined
    first-success threshold, which is the minimal tolerance whose
    success fraction reaches j/k.  Rows asking for more coverage than
    the supported pixels can provide are marked unreachable.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    sorted_first = profile.sorted_first_success
    n_defined = int(sorted_first.size)
    if n_defined == 0:
        raise EmptyTableError("no supported pixel: coverage table is empty")
    h, w = profile.shape
    n_px = h * w
    alphas: list[float] = []
    taus: list[float | None] = []
    reachable: list[bool] = []
    for j in range(k + 1):
        alphas.append(j / k)
        m = (j * n_px + k - 1) // k  # exact ceil(j * n_px / k)
        if m > n_defined:
            taus.append(None)
            reachable.append(False)
        elif m == 0:
            taus.append(0.0)
            reachable.append(True)
        else:
            taus.append(float(sorted_first[m - 1]))
            reachable.append(True)
    return SuccessTable(
        k=k,
        alphas=alphas,
        tau_primes=taus,
        reachable=reachable,
        attainable_max=n_defined / n_px,
    )


def resolve_coverage(table: SuccessTable, coverage: float) -> tuple[float, float]:
    """Tolerance for a requested coverage fraction in [0, 1].

    Picks the first table row with coverage >= the request; returns
    (row coverage, tolerance).
    """
    if not 0.0 <= coverage <= 1.0:
        raise ValueError("coverage must be within [0, 1]")
    for alpha, tau, ok in zip(table.alphas, table.tau_primes, table.reachable):
        if ok and alpha >= coverage:
            return alpha, float(tau)
    raise UnreachableCoverageError(
        f"coverage {coverage:.4f} unreachable; at most "
        f"{table.attainable_max:.4f} of pixels can succeed",
        attainable_max=table.attainable_max,
    )


def render_defect_map(dmap: DefectMap) -> np.ndarray:
    """RGB rendering: successful green, defective red, unsupported black."""
    h, w = dmap.values.shape
    out = np.zeros((h, w, 3), dtype=np.uint8)
    with np.errstate(invalid="ignore"):
        successful = dmap.values > 0.0
        defective = dmap.values <= 0.0
    out[successful] = GREEN
    out[defective] = RED
    return out
