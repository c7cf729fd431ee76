from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from abdirac.errors import DomainError
from abdirac.halfint import HalfInteger, half_odd, half_odd_range, nearest_half_odd


def test_parsing():
    assert HalfInteger.of("-3/2") == HalfInteger(-3)
    assert HalfInteger.of(2.5).value == Fraction(5, 2)
    assert str(HalfInteger.of(Fraction(7, 2))) == "7/2"
    assert float(HalfInteger(5)) == 2.5
    with pytest.raises(DomainError):
        HalfInteger.of(0.3)
    with pytest.raises(DomainError):
        half_odd(2)


def test_range():
    labels = half_odd_range("5/2")
    assert [float(h) for h in labels] == [-2.5, -1.5, -0.5, 0.5, 1.5, 2.5]
    assert half_odd_range(0) == []
    assert [float(h) for h in half_odd_range(3.5, positive_only=True)] == [0.5, 1.5, 2.5, 3.5]


def test_nearest_ties_downward():
    assert nearest_half_odd(100.0) == HalfInteger(199)
    assert nearest_half_odd(1.0) == HalfInteger(1)
    assert nearest_half_odd(0.1) == HalfInteger(1)
    assert nearest_half_odd(2.4) == HalfInteger(5)
    assert nearest_half_odd(2.6) == HalfInteger(5)


@given(st.floats(min_value=0.5, max_value=1e6))
def test_nearest_within_half(x):
    h = nearest_half_odd(x)
    assert h.is_half_odd
    assert abs(float(h) - x) <= 0.5


@given(st.integers(-1000, 1000), st.integers(-5, 5))
def test_shift_and_negation(t, s):
    h = HalfInteger(2 * t + 1)
    assert -(-h) == h
    assert h.shift(s).value == h.value + s
    assert abs(h) >= HalfInteger(1)
