import numpy as np
import pytest

from ckspace.utils import clamp, distance, interpolate, letters, normalize, slope


class TestMath:
    def test_distance(self):
        assert distance(0.0, 3.0) == 3.0
        assert distance(np.zeros((2, 2)), np.ones((2, 2))) == 2.0

    def test_interpolate(self):
        assert interpolate(0.0, 10.0, 0.25) == 2.5
        np.testing.assert_array_equal(interpolate(np.zeros(2), np.ones(2), 1.0), np.ones(2))

    def test_slope(self):
        assert slope([0.5, 0.6, 0.7]) == pytest.approx(0.1)
        assert slope([1.0, 1.0]) == 0.0

        with pytest.raises(ValueError):
            slope([1.0])

    def test_clamp(self):
        assert clamp(1.5) == 1.0
        assert clamp(-1.0) == 0.0
        assert clamp(5.0, 0.0, 10.0) == 5.0


class TestText:
    def test_backspace(self):
        assert normalize("Bla\bal") == "Blal"
        assert normalize("\b\bab") == "ab"
        assert normalize("ab\u007f\u007f") == ""

    def test_composed(self):
        assert normalize("a\u0301") == "\u00e1"

    def test_letters(self):
        assert letters("Ball") == 4
        assert letters("3-4") == 0
