import numpy as np
import pytest

from cldmaps import (
    DegenerateCurveError,
    DegenerateImageError,
    compute_stats,
    optimize_tau,
    quality_curve,
    quality_product,
)
from cldmaps.engine import LengthProfile
from cldmaps.fixtures import checkerboard, constant, two_texture_composite, uniform_noise
from cldmaps.optimize import evaluate_indexes, threshold_grid


def test_quality_product_example():
    product, omega_min, support_min = quality_product(
        np.array([3.0, 2.0, 1.0]), np.array([0.2, 0.6, 1.0])
    )
    assert omega_min == 1.0
    assert support_min == 0.2
    assert product.tolist() == [0.0, pytest.approx(0.4), 0.0]


def test_quality_product_constant_factor_vanishes():
    product, _, _ = quality_product(np.array([2.0, 2.0]), np.array([0.1, 0.9]))
    assert (product == 0.0).all()
    product, _, _ = quality_product(np.array([3.0, 1.0]), np.array([0.5, 0.5]))
    assert (product == 0.0).all()


def test_threshold_grid_structure():
    grid = threshold_grid(0.8, 64)
    assert grid.shape == (64,)
    assert (np.diff(grid) > 0).all()
    assert grid[-1] == 0.8
    assert grid[0] > 0.0


def test_support_index_non_decreasing():
    img = uniform_noise(24, 24, seed=3)
    curve = quality_curve(img, compute_stats(img), 16)
    assert (np.diff(curve.support) >= 0).all()
    assert (curve.product >= 0.0).all()


def test_constant_image_rejected():
    img = constant(8, 8, 128)
    with pytest.raises(DegenerateImageError):
        quality_curve(img, compute_stats(img), 16)


def test_degenerate_product_error_carries_fallback():
    # 2x2 two-tone image: saturation only ever happens on exact-mean
    # sample pairs, so the product has no positive grid point
    img = np.array([[60, 60], [128, 128]], dtype=np.uint8)
    stats = compute_stats(img)
    with pytest.raises(DegenerateCurveError) as err:
        optimize_tau(img, stats, grid_size=8)
    assert err.value.fallback_tau == pytest.approx(stats.tau_max / 2.0)


def test_tau0_dominates_grid():
    img = uniform_noise(32, 32, seed=9)
    stats = compute_stats(img)
    result = optimize_tau(img, stats, 32)
    assert 0.0 < result.tau0 <= stats.tau_max
    assert (result.pi_at_tau0 >= result.curve.product).all()


def test_monotone_curves_give_interior_tau0():
    # omega falls and support rises on noise, so both grid extremes vanish
    img = uniform_noise(32, 32, seed=1)
    stats = compute_stats(img)
    result = optimize_tau(img, stats, 32)
    assert (np.diff(result.curve.omega) <= 0).all()
    assert (np.diff(result.curve.support) >= 0).all()
    assert result.curve.taus[0] < result.tau0 < stats.tau_max


def test_dense_grid_oracle_composite():
    # brute-force 1024-point evaluation must agree within one coarse spacing
    img = two_texture_composite(64, 64, 2, 4)
    stats = compute_stats(img)
    profile = LengthProfile.from_image(img, stats)
    grid_size = 64
    result = optimize_tau(img, stats, grid_size, profile=profile)

    dense = threshold_grid(stats.tau_max, 1024)
    omega = np.empty(dense.size)
    support = np.empty(dense.size)
    for j, tau in enumerate(dense):
        omega[j], support[j] = evaluate_indexes(profile, float(tau))
    product = (support - result.curve.support_min) * (omega - result.curve.omega_min)
    dense_best = dense[int(np.argmax(product))]
    spacing = stats.tau_max / grid_size
    assert abs(result.tau0 - dense_best) <= spacing + 1e-12


def test_refinement_beats_coarse_grid():
    img = checkerboard(32, 32, 2)
    stats = compute_stats(img)
    res = optimize_tau(img, stats, 16)
    coarse_max = res.curve.product.max()
    assert res.pi_at_tau0 >= coarse_max
