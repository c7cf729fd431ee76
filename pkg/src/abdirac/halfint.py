"""Exact half-integer quantum numbers stored as doubled integers."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import DomainError

HalfLike = Union["HalfInteger", int, float, Fraction, str]


@dataclass(frozen=True, order=True)
class HalfInteger:
    """A multiple of 1/2, held as ``twice`` = 2 * value."""

    twice: int

    def __post_init__(self):
        if not isinstance(self.twice, int) or isinstance(self.twice, bool):
            raise TypeError("twice must be an int")

    @classmethod
    def of(cls, value: HalfLike) -> HalfInteger:
        """Coerce ``value`` (number, Fraction or text like ``"-3/2"``) to a HalfInteger."""
        if isinstance(value, HalfInteger):
            return value
        if isinstance(value, str):
            value = Fraction(value.strip())
        doubled = Fraction(value) * 2
        if doubled.denominator != 1:
            raise DomainError(f"{value!r} is not a multiple of 1/2")
        return cls(int(doubled))

    @property
    def value(self) -> Fraction:
        return Fraction(self.twice, 2)

    @property
    def is_half_odd(self) -> bool:
        return self.twice % 2 != 0

    def __float__(self) -> float:
        return self.twice / 2

    def __neg__(self) -> HalfInteger:
        return HalfInteger(-self.twice)

    def __abs__(self) -> HalfInteger:
        return HalfInteger(abs(self.twice))

    def shift(self, steps: int) -> HalfInteger:
        """Add an integer ``steps``."""
        return HalfInteger(self.twice + 2 * steps)

    def __str__(self) -> str:
        return str(self.twice // 2) if self.twice % 2 == 0 else f"{self.twice}/2"


def half_odd(value: HalfLike) -> HalfInteger:
    """Coerce to a half-odd-integer angular label, rejecting integers."""
    h = HalfInteger.of(value)
    if not h.is_half_odd:
        raise DomainError(f"angular label must be half-odd, got {h}")
    return h


def half_odd_range(max_abs: HalfLike, positive_only: bool = False) -> list[HalfInteger]:
    """Half-odd labels with |label| <= max_abs in ascending order."""
    top = HalfInteger.of(max_abs).twice
    positive = [HalfInteger(t) for t in range(1, top + 1, 2)]
    if positive_only:
        return positive
    return [-h for h in reversed(positive)] + positive


def nearest_half_odd(x: float) -> HalfInteger:
    """Half-odd integer nearest to ``x`` (x > 0), ties resolved downward."""
    frac = Fraction(x)
    twice = 2 * frac
    lo = twice.__floor__()
    if lo % 2 == 0:
        cand = lo + 1 if twice > lo else lo - 1
    else:
        cand = lo + 2 if twice - lo > 1 else lo
    return HalfInteger(max(cand, 1))
