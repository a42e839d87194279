"""Shared fixtures and independent oracle helpers."""

import numpy as np
import pytest

from cldmaps import compute_stats
from cldmaps.engine import N_DIRECTIONS, coherence_length
from cldmaps.fixtures import checkerboard


def random_image(seed: int, height: int = 32, width: int = 32) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.integers(0, 256, size=(height, width), dtype=np.uint8)


def naive_local_cld(img: np.ndarray, stats, tau: float) -> np.ndarray:
    """Per-(pixel, direction) re-walk using the scalar reference path."""
    h, w = img.shape
    out = np.zeros((N_DIRECTIONS, h, w), dtype=np.int32)
    for i in range(N_DIRECTIONS):
        for y in range(h):
            for x in range(w):
                n = coherence_length(img, stats, x, y, i, tau)
                out[i, y, x] = 0 if n is None else n
    return out


@pytest.fixture
def checker8():
    img = checkerboard(8, 8, 1)
    return img, compute_stats(img)


@pytest.fixture
def rand16():
    img = random_image(11, 16, 16)
    return img, compute_stats(img)
