import math

import numpy as np
import pytest

from tribvp import RangeViolation, by_name, curvature, scaled_atan


def test_curvature_known_values():
    phi = curvature()
    assert phi.a == 1.0
    assert phi.forward(0.0) == 0.0
    assert phi.forward(1.0) == pytest.approx(1 / math.sqrt(2), abs=1e-15)
    assert phi.inverse(0.6) == pytest.approx(0.75, abs=1e-15)


def test_scaled_atan_range():
    phi = scaled_atan(2.0)
    assert phi.a == 2.0
    assert phi.forward(0.0) == 0.0
    assert phi.forward(1e12) < 2.0
    assert phi.inverse(1.0) == pytest.approx(math.tan(math.pi / 4), abs=1e-12)


@pytest.mark.parametrize("make", [curvature, lambda: scaled_atan(1.0),
                                  lambda: scaled_atan(0.3)])
def test_roundtrip_random(make):
    phi = make()
    rng = np.random.default_rng(4)
    s = rng.uniform(-50, 50, size=500)
    back = phi.inverse(phi.forward(s))
    assert np.max(np.abs(back - s) / (1 + np.abs(s))) < 1e-9


def test_forward_is_strictly_inside_open_interval():
    # the limit value a must never be reached, even for huge arguments where
    # the formula rounds onto it
    phi = curvature()
    for s in (1e8, 1e16, -1e300):
        y = phi.forward(s)
        assert abs(y) < 1.0
    arr = phi.forward(np.array([1e8, -1e9, 1e300]))
    assert np.all(np.abs(arr) < 1.0)


def test_inverse_rejects_out_of_range():
    phi = curvature()
    with pytest.raises(RangeViolation):
        phi.inverse(1.0)
    with pytest.raises(RangeViolation):
        phi.inverse(-1.0)
    with pytest.raises(RangeViolation) as info:
        phi.inverse(np.array([0.0, 0.5, 1.2, 0.1]))
    assert info.value.node == 2
    assert info.value.worst == pytest.approx(1.2)


def test_monotone_on_random_pairs():
    rng = np.random.default_rng(9)
    for phi in (curvature(), scaled_atan(0.7)):
        s = np.sort(rng.uniform(-20, 20, size=200))
        y = phi.forward(s)
        assert np.all(np.diff(y) > 0)


def test_by_name():
    assert by_name("curvature", 1.0).name == "curvature"
    assert by_name("atan", 1.5).a == 1.5
    with pytest.raises(ValueError):
        by_name("curvature", 2.0)  # that family has a = 1 built in
    with pytest.raises(ValueError):
        by_name("sigmoid", 1.0)
    with pytest.raises(ValueError):
        by_name("atan", -1.0)
