import numpy as np
import pytest

from cldmaps.errors import DimensionError
from cldmaps.validation import (
    check_gray_image,
    check_tau_percent,
    percent_to_ratio,
    ratio_to_percent,
)


def test_percent_ratio_round_trip_tight():
    for percent in np.linspace(0.01, 100.0, 997):
        back = ratio_to_percent(percent_to_ratio(float(percent)))
        assert back == pytest.approx(percent, rel=1e-12)
    for ratio in np.linspace(1e-6, 1.0, 997):
        back = percent_to_ratio(ratio_to_percent(float(ratio)))
        assert back == pytest.approx(ratio, rel=1e-12)


def test_check_tau_percent_bounds():
    assert check_tau_percent(45.0) == 0.45
    for bad in (0.0, -3.0, 100.5):
        with pytest.raises(ValueError):
            check_tau_percent(bad)


def test_check_gray_image_coercion():
    out = check_gray_image([[0, 128], [255, 1]])
    assert out.dtype == np.uint8
    assert out.shape == (2, 2)


def test_check_gray_image_rejects_bad_input():
    with pytest.raises(DimensionError):
        check_gray_image(np.zeros((3,), dtype=np.uint8))
    with pytest.raises(DimensionError):
        check_gray_image(np.zeros((0, 4), dtype=np.uint8))
    with pytest.raises(ValueError):
        check_gray_image([[300, 0]])
    with pytest.raises(ValueError):
        check_gray_image([[0.5, 0.25]])
