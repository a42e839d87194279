"""Deterministic synthetic textures for tests and the fixture CLI command."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError

KINDS = ("checkerboard", "two-texture-composite", "constant", "uniform-noise")


@dataclass(frozen=True)
class SyntheticSpec:
    """Recipe for a synthetic test image; generation is deterministic."""

    kind: str
    width: int
    height: int
    cell: int = 2  # checkerboard cell / composite left-half cell
    cell_right: int = 8  # composite right-half cell
    value: int = 128  # constant brightness
    seed: int = 0  # noise seed
    lo: int = 0
    hi: int = 255
    missing_cell: tuple[int, int] | None = None  # checkerboard cell (cx, cy) to blank


def checkerboard(
    height: int,
    width: int,
    cell: int,
    lo: int = 0,
    hi: int = 255,
    missing_cell: tuple[int, int] | None = None,
) -> np.ndarray:
    """Alternating cells of two brightness values.

    `missing_cell` paints one cell with the bare-background value 255,
    emulating a texture defect (a deleted square).
    """
    ys, xs = np.mgrid[0:height, 0:width]
    board = np.where(((xs // cell) + (ys // cell)) % 2 == 0, lo, hi).astype(np.uint8)
    if missing_cell is not None:
        cx, cy = missing_cell
        board[cy * cell:(cy + 1) * cell, cx * cell:(cx + 1) * cell] = 255
    return board


def two_texture_composite(
    height: int, width: int, cell_left: int, cell_right: int,
    lo: int = 0, hi: int = 255,
) -> np.ndarray:
    """Left half one checkerboard scale, right half another."""
    half = width // 2
    out = np.empty((height, width), dtype=np.uint8)
    out[:, :half] = checkerboard(height, half, cell_left, lo, hi)
    out[:, half:] = checkerboard(height, width - half, cell_right, lo, hi)
    return out


def constant(height: int, width: int, value: int) -> np.ndarray:
    return np.full((height, width), value, dtype=np.uint8)


def uniform_noise(height: int, width: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.integers(0, 256, size=(height, width), dtype=np.uint8)


def generate_fixture(spec: SyntheticSpec) -> np.ndarray:
    """Build the image described by the recipe."""
    if spec.width < 1 or spec.height < 1:
        raise DimensionError(f"fixture dimensions {spec.width}x{spec.height} invalid")
    if spec.kind == "checkerboard":
        return checkerboard(
            spec.height, spec.width, spec.cell, spec.lo, spec.hi, spec.missing_cell
        )
    if spec.kind == "two-texture-composite":
        return two_texture_composite(
            spec.height, spec.width, spec.cell, spec.cell_right, spec.lo, spec.hi
        )
    if spec.kind == "constant":
        return constant(spec.height, spec.width, spec.value)
    if spec.kind == "uniform-noise":
        return uniform_noise(spec.height, spec.width, spec.seed)
    raise ValueError(f"unknown fixture kind {spec.kind!r}; choose one of {KINDS}")
