import numpy as np
import pytest

from cldmaps import (
    EmptyTableError,
    UnreachableCoverageError,
    compute_stats,
    coverage_table,
    defect_map,
    first_success_threshold,
    local_cld,
    max_length_deviation,
    overall_cld,
    render_defect_map,
    resolve_coverage,
    success_balance,
    success_fraction,
    success_profile,
)
from cldmaps.defect import GREEN, RED, length_ratios
from cldmaps.engine import N_DIRECTIONS
from conftest import random_image


def synthetic_local(columns: dict[tuple[int, int], list[int]], shape=(1, 1)):
    """Build a (32, h, w) length grid from per-pixel direction lists."""
    h, w = shape
    local = np.zeros((N_DIRECTIONS, h, w), dtype=np.int32)
    for (x, y), lengths in columns.items():
        for i, n in enumerate(lengths):
            local[i, y, x] = n
    return local


def toy_three_direction():
    # three counted directions with lengths (2, 2, 4) against means (2, 2, 2)
    local = synthetic_local({(0, 0): [2, 2, 4]}, shape=(1, 2))
    local[:3, 0, 1] = [2, 2, 2]  # second pixel pins the means
    local[:3, 0, 0] = [2, 2, 4]
    # means over both pixels: (2, 2, 3)
    return local


def test_vote_score_counts():
    local = np.zeros((N_DIRECTIONS, 1, 1), dtype=np.int32)
    local[:, 0, 0] = 2
    overall = overall_cld(local, 0.1)
    # craft ratios via lengths: 20 directions at the mean, 12 off it
    local2 = local.copy()
    local2[:12, 0, 0] = 4
    overall2 = overall_cld(np.concatenate([local, local2], axis=2), 0.1)
    psi = success_balance(np.concatenate([local, local2], axis=2), overall2, 1, 0, 0.0)
    # ratios at pixel 1: 12 dirs |4-3|/3, 20 dirs |2-2|/2 = 0 -> s=20, c=32
    assert psi == pytest.approx(2 * 20 / 32 - 1)  # 0.25


def test_vote_score_all_at_mean_is_plus_one():
    local = np.zeros((N_DIRECTIONS, 1, 1), dtype=np.int32)
    local[:, 0, 0] = 3
    overall = overall_cld(local, 0.1)
    assert success_balance(local, overall, 0, 0, 0.0) == 1.0


def test_vote_score_at_max_deviation_is_plus_one(rand16):
    img, stats = rand16
    local = local_cld(img, stats, 0.15)
    overall = overall_cld(local, 0.15)
    for (x, y) in [(0, 0), (7, 3), (15, 15), (8, 12)]:
        bound = max_length_deviation(local, overall, x, y)
        if bound is None:
            continue
        assert success_balance(local, overall, x, y, bound) == 1.0


def test_vote_score_unsupported_pixel_is_none():
    local = np.zeros((N_DIRECTIONS, 1, 2), dtype=np.int32)
    local[:, 0, 1] = 1
    overall = overall_cld(local, 0.1)
    assert success_balance(local, overall, 0, 0, 0.5) is None
    assert max_length_deviation(local, overall, 0, 0) is None
    assert first_success_threshold(local, overall, 0, 0) is None


def test_max_length_deviation_toy():
    local = toy_three_direction()
    overall = overall_cld(local, 0.1)
    assert overall.mean_lengths[2] == 3.0
    # pixel 0: ratios (0, 0, 1/3); pixel 1: ratios (0, 0, 1/3)
    assert max_length_deviation(local, overall, 0, 0) == pytest.approx(1.0 / 3.0)


def test_max_length_deviation_matches_brute_force(checker8):
    img, stats = checker8
    local = local_cld(img, stats, 0.1)
    overall = overall_cld(local, 0.1)
    for y in range(8):
        for x in range(8):
            got = max_length_deviation(local, overall, x, y)
            best = None
            for i in range(N_DIRECTIONS):
                n = local[i, y, x]
                m = overall.mean_lengths[i]
                if n > 0 and not np.isnan(m):
                    r = abs(float(n) - m) / m
                    best = r if best is None else max(best, r)
            assert got == best


def test_first_success_threshold_all_at_mean():
    local = np.zeros((N_DIRECTIONS, 1, 1), dtype=np.int32)
    local[:, 0, 0] = 2
    overall = overall_cld(local, 0.1)
    assert first_success_threshold(local, overall, 0, 0) == 0.0


def test_first_success_threshold_small_case():
    # 3 counted directions, ratios (0, 0.5, 1.0): two of three succeed at 0.5
    local = np.zeros((N_DIRECTIONS, 1, 2), dtype=np.int32)
    local[:3, 0, 0] = [4, 4, 4]
    local[:3, 0, 1] = [4, 2, 8]  # means (4, 3, 6): ratios (0, 1/3, 1/3) - adjust
    overall = overall_cld(local, 0.1)
    ratios = length_ratios(local, overall)[:3, 0, 1]
    expect = float(np.sort(ratios)[1])  # s = 2 of c = 3
    assert first_success_threshold(local, overall, 1, 0) == pytest.approx(expect)


def test_first_success_threshold_order_statistic():
    # 32 distinct ratios: the vote turns positive at the 17th smallest
    rng = np.random.default_rng(3)
    local = np.zeros((N_DIRECTIONS, 1, 2), dtype=np.int32)
    local[:, 0, 0] = 10
    # per-direction means (10 + l)/2 with l > 10 make |l - m|/m strictly
    # increasing in l, so the 32 ratios are distinct
    local[:, 0, 1] = rng.permutation(np.arange(11, 43))
    overall = overall_cld(local, 0.1)
    ratios = np.sort(length_ratios(local, overall)[:, 0, 1])
    assert len(set(ratios.tolist())) == N_DIRECTIONS  # distinct for this seed
    got = first_success_threshold(local, overall, 1, 0)
    assert got == pytest.approx(float(ratios[16]), abs=1e-9)


@pytest.mark.parametrize("seed", [5, 6, 7])
def test_bisection_agrees_with_sorted_profile(seed):
    img = random_image(seed, 16, 16)
    stats = compute_stats(img)
    local = local_cld(img, stats, 0.2)
    overall = overall_cld(local, 0.2)
    profile = success_profile(local, overall)
    for y in range(0, 16, 3):
        for x in range(0, 16, 3):
            scalar = first_success_threshold(local, overall, x, y)
            grid_val = profile.first_success[y, x]
            if scalar is None:
                assert np.isnan(grid_val)
            else:
                assert abs(scalar - grid_val) <= 1e-9


def test_success_fraction_jumps_by_multiplicity(rand16):
    img, stats = rand16
    local = local_cld(img, stats, 0.2)
    overall = overall_cld(local, 0.2)
    profile = success_profile(local, overall)
    vals = profile.sorted_first_success
    n_px = img.size
    for v in np.unique(vals)[:20]:
        below = success_fraction(profile, float(np.nextafter(v, -np.inf))) if v > 0 else 0.0
        at = success_fraction(profile, float(v))
        assert at - below == pytest.approx(np.count_nonzero(vals == v) / n_px)


def test_success_fraction_extremes(rand16):
    img, stats = rand16
    local = local_cld(img, stats, stats.tau_max)
    overall = overall_cld(local, stats.tau_max)
    profile = success_profile(local, overall)
    assert success_fraction(profile, profile.max_deviation) == 1.0
    if profile.sorted_first_success[0] > 0:
        assert success_fraction(profile, 0.0) == 0.0


def test_coverage_table_k1(rand16):
    img, stats = rand16
    local = local_cld(img, stats, stats.tau_max)
    profile = success_profile(local, overall_cld(local, stats.tau_max))
    table = coverage_table(profile, 1)
    assert table.alphas == [0.0, 1.0]
    assert table.tau_primes[0] == 0.0
    assert table.tau_primes[1] == float(profile.sorted_first_success[-1])
    assert table.attainable_max == 1.0


def test_coverage_table_single_value():
    local = np.zeros((N_DIRECTIONS, 2, 2), dtype=np.int32)
    local[:, :, :] = 3
    local[0] = 6  # every pixel: one ratio > 0, all identical
    overall = overall_cld(local, 0.1)
    profile = success_profile(local, overall)
    g = float(profile.sorted_first_success[0])
    assert (profile.sorted_first_success == g).all()
    table = coverage_table(profile, 4)
    for j in range(1, 5):
        assert table.tau_primes[j] == g


def test_coverage_table_row_contract(rand16):
    img, stats = rand16
    local = local_cld(img, stats, 0.25)
    overall = overall_cld(local, 0.25)
    profile = success_profile(local, overall)
    table = coverage_table(profile, 10)
    for alpha, tau, ok in zip(table.alphas, table.tau_primes, table.reachable):
        if not ok:
            assert alpha > table.attainable_max
            continue
        assert success_fraction(profile, tau) >= alpha
        if tau > 0:
            assert success_fraction(profile, tau - 1e-12) < alpha


def test_coverage_table_empty():
    local = np.zeros((N_DIRECTIONS, 2, 2), dtype=np.int32)
    profile = success_profile(local, overall_cld(local, 0.1))
    with pytest.raises(EmptyTableError):
        coverage_table(profile, 5)


def test_resolve_coverage_unreachable():
    local = np.zeros((N_DIRECTIONS, 2, 2), dtype=np.int32)
    local[:, 0, 0] = 1  # only one supported pixel: attainable 25%
    profile = success_profile(local, overall_cld(local, 0.1))
    table = coverage_table(profile, 4)
    assert resolve_coverage(table, 0.25)[0] == 0.25
    with pytest.raises(UnreachableCoverageError) as err:
        resolve_coverage(table, 0.5)
    assert err.value.attainable_max == 0.25


def test_render_colors():
    from cldmaps.defect import DefectMap

    values = np.array([[0.5, -0.25], [np.nan, 1.0]])
    rgb = render_defect_map(DefectMap(tau_prime=0.1, values=values))
    assert tuple(rgb[0, 0]) == GREEN
    assert tuple(rgb[0, 1]) == RED
    assert tuple(rgb[1, 0]) == (0, 0, 0)
    assert tuple(rgb[1, 1]) == GREEN


def test_defect_map_classification_consistency(rand16):
    img, stats = rand16
    local = local_cld(img, stats, 0.3)
    overall = overall_cld(local, 0.3)
    dmap = defect_map(local, overall, 0.2)
    for y in range(0, 16, 5):
        for x in range(0, 16, 5):
            scalar = success_balance(local, overall, x, y, 0.2)
            if scalar is None:
                assert np.isnan(dmap.values[y, x])
            else:
                assert dmap.values[y, x] == scalar


def test_rendered_green_fraction_matches_table(rand16):
    # the green pixels at a table tolerance are exactly the pixels the
    # success fraction counts, so every row's coverage is delivered
    img, stats = rand16
    local = local_cld(img, stats, 0.25)
    overall = overall_cld(local, 0.25)
    profile = success_profile(local, overall)
    table = coverage_table(profile, 5)
    for alpha, tau, ok in zip(table.alphas, table.tau_primes, table.reachable):
        if not ok:
            continue
        rgb = render_defect_map(defect_map(local, overall, tau))
        green = np.all(rgb == GREEN, axis=-1).sum() / img.size
        assert green == success_fraction(profile, tau)
        assert green >= alpha


def test_vote_monotone_in_tolerance(rand16):
    img, stats = rand16
    local = local_cld(img, stats, 0.2)
    overall = overall_cld(local, 0.2)
    prev = None
    for tol in np.linspace(0, 1.5, 12):
        cur = defect_map(local, overall, float(tol)).values
        if prev is not None:
            both = ~np.isnan(cur)
            assert (cur[both] >= prev[both]).all()
        prev = cur
