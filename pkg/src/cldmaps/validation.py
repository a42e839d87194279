"""Input validation helpers shared by the estimators, CLI and service."""

from __future__ import annotations

import numpy as np

from .errors import DimensionError


def check_gray_image(X) -> np.ndarray:
    """Coerce input to a 2-D uint8 grayscale array.

    Accepts any integer array-like with values in [0, 255] and at
    least one pixel.
    """
    arr = np.asarray(X)
    if arr.ndim != 2:
        raise DimensionError(f"expected a 2-D grayscale array, got ndim={arr.ndim}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise DimensionError(f"image has a zero dimension: {arr.shape}")
    if arr.dtype != np.uint8:
        if not np.issubdtype(arr.dtype, np.integer):
            raise ValueError("pixel values must be integers in [0, 255]")
        if arr.min() < 0 or arr.max() > 255:
            raise ValueError("pixel values must lie in [0, 255]")
        arr = arr.astype(np.uint8)
    return arr


def percent_to_ratio(percent: float) -> float:
    return percent / 100.0


def ratio_to_percent(ratio: float) -> float:
    return ratio * 100.0


def check_tau_percent(percent: float) -> float:
    """Validate a saturation threshold given in percent, return the ratio."""
    if not 0.0 < percent <= 100.0:
        raise ValueError(f"tau percentage {percent} outside (0, 100]")
    return percent_to_ratio(percent)


def check_fraction(value: float, name: str) -> float:
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} {value} outside [0, 1]")
    return value
