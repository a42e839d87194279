"""Grayscale image loading and global brightness statistics.

Images are plain 2-D uint8 numpy arrays (row-major, values 0..255).
Every other module consumes the mean brightness and the relative
saturation range computed here.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import DecodeError, DegenerateImageError, DimensionError

# ITU-R BT.601 luminance weights for color inputs
LUMA_WEIGHTS = (0.299, 0.587, 0.114)


@dataclass(frozen=True)
class ImageStats:
    """Global brightness statistics of a grayscale image.

    Attributes
    ----------
    mean_brightness : float
        Arithmetic mean of all pixel values.
    max_abs_deviation : float
        max over pixels of |b - mean|.
    tau_max : float
        max_abs_deviation / mean_brightness; the largest saturation
        threshold that is still meaningful.
    """

    mean_brightness: float
    max_abs_deviation: float
    tau_max: float


def to_gray(rgb: np.ndarray) -> np.ndarray:
    """Convert an (h, w, 3) RGB array to uint8 luminance."""
    r = rgb[..., 0].astype(np.float64)
    g = rgb[..., 1].astype(np.float64)
    b = rgb[..., 2].astype(np.float64)
    wr, wg, wb = LUMA_WEIGHTS
    luma = wr * r + wg * g + wb * b
    return np.rint(luma).astype(np.uint8)


def load_gray(path: str | Path) -> np.ndarray:
    """Load a BMP/JPEG/PNG file as a 2-D uint8 grayscale array.

    Color inputs are converted with the fixed luminance weights;
    grayscale inputs pass through unchanged.
    """
    try:
        with Image.open(path) as im:
            im.load()
            if im.mode == "L":
                arr = np.asarray(im, dtype=np.uint8)
            else:
                arr = to_gray(np.asarray(im.convert("RGB")))
    except (UnidentifiedImageError, OSError) as exc:
        raise DecodeError(f"cannot decode image file {path!r}: {exc}") from exc
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise DimensionError(f"image {path!r} has unusable shape {arr.shape}")
    return arr


def compute_stats(img: np.ndarray) -> ImageStats:
    """Mean brightness, maximum absolute deviation and tau_max.

    Raises
    ------
    DegenerateImageError
        If the mean brightness is zero (all-black image), which leaves
        the relative saturation range undefined.
    """
    values = img.astype(np.float64)
    mean = float(values.mean())
    if mean == 0.0:
        raise DegenerateImageError("all-black image: mean brightness is 0")
    max_dev = float(np.abs(values - mean).max())
    return ImageStats(
        mean_brightness=mean,
        max_abs_deviation=max_dev,
        tau_max=max_dev / mean,
    )
