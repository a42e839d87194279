"""Directional coherence lengths, the overall polar diagram and the support map.

For a pixel (x, y) and direction index i (angle i * 2*pi/32, swept
counterclockwise in display coordinates, image y axis pointing down),
the ray samples are

    p_k = (x + round(k * cos a), y - round(k * sin a)),   k = 0, 1, 2, ...

The coherence length is the smallest n >= 1 such that p_0..p_{n-1} all
lie inside the image and the running brightness mean satisfies

    |mean_n - M0| / M0 <= tau

with M0 the image mean.  The comparison is carried out in relative
form so that at tau == tau_max every single-sample mean saturates
exactly and the diagram collapses to a point.  If the ray leaves the
image before saturating, the length is not computable for that pixel
and direction.

Two computation paths exist and are required to agree bit for bit:

* :func:`coherence_length` -- the plain per-ray walk (reference path);
* :func:`local_cld` / :class:`LengthProfile` -- vectorized paths, the
  second amortizing the walk over many thresholds by recording the
  running minima of the relative deviation along each ray.

Absent lengths are encoded as 0 in the (32, h, w) int32 length grids.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NoSupportError
from .image import ImageStats

N_DIRECTIONS = 32

_TWO_PI = 2.0 * math.pi


def direction_angles() -> np.ndarray:
    """The 32 ray angles in radians, index i -> i * 2*pi/32."""
    return np.arange(N_DIRECTIONS, dtype=np.float64) * (_TWO_PI / N_DIRECTIONS)


def ray_offsets(angle: float, height: int, width: int) -> tuple[np.ndarray, np.ndarray]:
    """Integer sample offsets (dx_k, dy_k) along a ray.

    The sequence stops at the first step for which no start pixel can
    keep the sample inside an height x width image; walks never need
    samples past that point.
    """
    c = math.cos(angle)
    s = math.sin(angle)
    kmax = int(math.hypot(height, width)) + 4
    while True:
        ks = np.arange(kmax, dtype=np.float64)
        dx = np.rint(ks * c).astype(np.int64)
        dy = np.rint(ks * (-s)).astype(np.int64)
        keep = (np.abs(dx) <= width - 1) & (np.abs(dy) <= height - 1)
        if not keep.all():
            n = int(np.argmin(keep))
            return dx[:n], dy[:n]
        kmax *= 2


def coherence_length(
    img: np.ndarray,
    stats: ImageStats,
    x: int,
    y: int,
    direction: int,
    tau: float,
) -> int | None:
    """Coherence length of one pixel in one direction, or None.

    This is the reference per-ray walk; optimized paths must reproduce
    it exactly.  `direction` is the 0-based index into the 32 angles.
    """
    h, w = img.shape
    if not (0 <= x < w and 0 <= y < h):
        raise ValueError(f"pixel ({x}, {y}) outside {w}x{h} image")
    if not 0 <= direction < N_DIRECTIONS:
        raise ValueError(f"direction index {direction} not in 0..{N_DIRECTIONS - 1}")
    if tau <= 0.0:
        raise ValueError("tau must be positive")
    angle = direction * (_TWO_PI / N_DIRECTIONS)
    c = math.cos(angle)
    s = math.sin(angle)
    m0 = stats.mean_brightness
    total = 0.0
    k = 0
    while True:
        px = x + round(k * c)
        py = y - round(k * s)
        if not (0 <= px < w and 0 <= py < h):
            return None
        total += float(img[py, px])
        n = k + 1
        if abs(total / n - m0) / m0 <= tau:
            return n
        k += 1


def local_cld(img: np.ndarray, stats: ImageStats, tau: float) -> np.ndarray:
    """Coherence lengths for every (pixel, direction) pair at one threshold.

    Returns a (32, h, w) int32 array; 0 marks lengths that are not
    computable because the ray exits the image first.
    """
    if tau <= 0.0:
        raise ValueError("tau must be positive")
    h, w = img.shape
    b = img.astype(np.float64).ravel()
    m0 = stats.mean_brightness
    n_px = h * w
    xs = np.tile(np.arange(w, dtype=np.int64), h)
    ys = np.repeat(np.arange(h, dtype=np.int64), w)
    out = np.zeros((N_DIRECTIONS, n_px), dtype=np.int32)

    for i in range(N_DIRECTIONS):
        dx, dy = ray_offsets(i * (_TWO_PI / N_DIRECTIONS), h, w)
        res = out[i]
        sums = np.zeros(n_px, dtype=np.float64)
        active = np.arange(n_px, dtype=np.int64)
        for k in range(len(dx)):
            px = xs[active] + dx[k]
            py = ys[active] + dy[k]
            inb = (px >= 0) & (px < w) & (py >= 0) & (py < h)
            if not inb.all():
                # rays leaving the image stay absent (res == 0)
                active = active[inb]
                px = px[inb]
                py = py[inb]
            if active.size == 0:
                break
            sums[active] += b[py * w + px]
            dev = np.abs(sums[active] / (k + 1) - m0) / m0
            sat = dev <= tau
            res[active[sat]] = k + 1
            active = active[~sat]
        # anything still active has exhausted the usable offsets: absent
    return out.reshape(N_DIRECTIONS, h, w)


@dataclass(frozen=True)
class OverallCLD:
    """Direction-averaged coherence lengths: the polar diagram.

    `mean_lengths[i]` is the mean of the computable lengths in
    direction i (NaN when `support_counts[i]` is 0).
    """

    tau: float
    mean_lengths: np.ndarray  # (32,) float64, NaN where unsupported
    support_counts: np.ndarray  # (32,) int64


def overall_cld(local: np.ndarray, tau: float) -> OverallCLD:
    """Average the local lengths per direction over their support domains."""
    flat = local.reshape(N_DIRECTIONS, -1)
    counts = np.count_nonzero(flat, axis=1).astype(np.int64)
    sums = flat.sum(axis=1, dtype=np.float64)
    means = np.full(N_DIRECTIONS, np.nan)
    nz = counts > 0
    means[nz] = sums[nz] / counts[nz]
    return OverallCLD(tau=tau, mean_lengths=means, support_counts=counts)


def support_map(local: np.ndarray) -> np.ndarray:
    """Per-pixel fraction of directions with a computable length."""
    return np.count_nonzero(local, axis=0) / float(N_DIRECTIONS)


def mean_diagram_length(overall: OverallCLD) -> float:
    """Average mean length over all 32 directions.

    Directions with empty support contribute 0 to the sum; the
    denominator stays 32.  Raises NoSupportError when every direction
    is empty.
    """
    if not (overall.support_counts > 0).any():
        raise NoSupportError("no direction has a computable coherence length")
    vals = np.where(overall.support_counts > 0, overall.mean_lengths, 0.0)
    return float(vals.sum() / N_DIRECTIONS)


def support_fraction(smap: np.ndarray) -> float:
    """Fraction of the image surface contributing to the diagram."""
    return float(smap.mean())


class LengthProfile:
    """Reusable per-ray saturation profile of one image.

    For every (pixel, direction) the walk is performed once to the
    image border, recording the strictly decreasing running minima of
    the relative deviation |mean_n - M0| / M0 together with the sample
    count n at which each minimum is reached.  The coherence length at
    any threshold tau is then the n of the first recorded minimum
    <= tau, which reproduces the single-threshold walk bit for bit.
    """

    def __init__(self, shape: tuple[int, int],
                 vals: list[np.ndarray], ns: list[np.ndarray],
                 starts: list[np.ndarray]):
        self.shape = shape
        self._vals = vals  # per direction: concatenated breakpoint deviations
        self._ns = ns  # per direction: sample counts, int32
        self._starts = starts  # per direction: row pointer, len h*w + 1

    @classmethod
    def from_image(cls, img: np.ndarray, stats: ImageStats) -> "LengthProfile":
        h, w = img.shape
        b = img.astype(np.float64).ravel()
        m0 = stats.mean_brightness
        n_px = h * w
        xs = np.tile(np.arange(w, dtype=np.int64), h)
        ys = np.repeat(np.arange(h, dtype=np.int64), w)

        vals_all: list[np.ndarray] = []
        ns_all: list[np.ndarray] = []
        starts_all: list[np.ndarray] = []
        for i in range(N_DIRECTIONS):
            dx, dy = ray_offsets(i * (_TWO_PI / N_DIRECTIONS), h, w)
            sums = np.zeros(n_px, dtype=np.float64)
            runmin = np.full(n_px, np.inf)
            px_chunks: list[np.ndarray] = []
            n_chunks: list[np.ndarray] = []
            v_chunks: list[np.ndarray] = []
            active = np.arange(n_px, dtype=np.int64)
            for k in range(len(dx)):
                px = xs[active] + dx[k]
                py = ys[active] + dy[k]
                inb = (px >= 0) & (px < w) & (py >= 0) & (py < h)
                if not inb.all():
                    active = active[inb]
                    px = px[inb]
                    py = py[inb]
                if active.size == 0:
                    break
                sums[active] += b[py * w + px]
                dev = np.abs(sums[active] / (k + 1) - m0) / m0
                lower = dev < runmin[active]
                if lower.any():
                    hit = active[lower]
                    runmin[hit] = dev[lower]
                    px_chunks.append(hit)
                    n_chunks.append(np.full(hit.size, k + 1, dtype=np.int32))
                    v_chunks.append(dev[lower])
            pixels = np.concatenate(px_chunks)
            ns = np.concatenate(n_chunks)
            vals = np.concatenate(v_chunks)
            # group by pixel, keeping ascending n (descending deviation) per row
            order = np.lexsort((ns, pixels))
            pixels = pixels[order]
            counts = np.bincount(pixels, minlength=n_px)
            starts = np.zeros(n_px + 1, dtype=np.int64)
            np.cumsum(counts, out=starts[1:])
            vals_all.append(vals[order])
            ns_all.append(ns[order])
            starts_all.append(starts)
        return cls((h, w), vals_all, ns_all, starts_all)

    def lengths_at(self, tau: float) -> np.ndarray:
        """Local coherence lengths at one threshold, (32, h, w) int32."""
        if tau <= 0.0:
            raise ValueError("tau must be positive")
        h, w = self.shape
        n_px = h * w
        out = np.zeros((N_DIRECTIONS, n_px), dtype=np.int32)
        for i in range(N_DIRECTIONS):
            vals = self._vals[i]
            starts = self._starts[i]
            row_len = np.diff(starts)
            # index of the first breakpoint with deviation <= tau
            above = (vals > tau).astype(np.int64)
            idx = np.add.reduceat(above, starts[:-1])
            has = idx < row_len
            out[i, has] = self._ns[i][starts[:-1][has] + idx[has]]
        return out.reshape(N_DIRECTIONS, h, w)
