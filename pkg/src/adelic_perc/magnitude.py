"""Exact positive magnitudes of the form ``base ** exponent``.

Absolute values at non-Archimedean places are always powers of a residue
field size, so they are stored as (integer base, rational exponent) and only
turned into floats at the sampling boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Union

ExponentLike = Union[int, Fraction, float, str]


def as_fraction(x: ExponentLike) -> Fraction:
    """Convert to an exact Fraction; floats go through their shortest repr."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"exponent must be finite, got {x}")
        return Fraction(repr(x))
    return Fraction(x)


def _perfect_power(n: int) -> tuple[int, int]:
    """Return (m, k) with n == m**k and k maximal."""
    best = (n, 1)
    for k in range(2, n.bit_length() + 1):
        m = round(n ** (1.0 / k))
        for cand in (m - 1, m, m + 1):
            if cand >= 2 and cand**k == n:
                best = (cand, k)
    return best


@dataclass(frozen=True, init=False)
class ExactMagnitude:
    """A positive real ``base ** exponent`` with exact rational exponent.

    The base is normalised to the smallest integer root, so ``4**-2`` and
    ``2**-4`` compare (and hash) equal.
    """

    base: int
    exponent: Fraction

    def __init__(self, base: int, exponent: ExponentLike = 0):
        if not isinstance(base, int) or base < 2:
            raise ValueError(f"base must be an integer >= 2, got {base!r}")
        root, k = _perfect_power(base)
        object.__setattr__(self, "base", root)
        object.__setattr__(self, "exponent", as_fraction(exponent) * k)

    @classmethod
    def one(cls, base: int = 2) -> "ExactMagnitude":
        return cls(base, 0)

    def is_one(self) -> bool:
        return self.exponent == 0

    def _combine_base(self, other: "ExactMagnitude") -> int:
        if self.base == other.base:
            return self.base
        # 1 is a power of every base
        if self.is_one():
            return other.base
        if other.is_one():
            return self.base
        raise ValueError(
            f"cannot combine magnitudes with bases {self.base} and {other.base} exactly"
        )

    def __mul__(self, other):
        if isinstance(other, ExactMagnitude):
            return ExactMagnitude(self._combine_base(other), self.exponent + other.exponent)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, ExactMagnitude):
            return ExactMagnitude(self._combine_base(other), self.exponent - other.exponent)
        return NotImplemented

    def __pow__(self, power: ExponentLike) -> "ExactMagnitude":
        return ExactMagnitude(self.base, self.exponent * as_fraction(power))

    def inverse(self) -> "ExactMagnitude":
        return ExactMagnitude(self.base, -self.exponent)

    def log(self) -> float:
        """Natural logarithm, computed from the exact exponent."""
        return float(self.exponent) * math.log(self.base)

    def __float__(self) -> float:
        # base**e with e a Fraction; math.pow keeps the float path cheap
        return math.pow(self.base, float(self.exponent)) if self.exponent else 1.0

    def __eq__(self, other):
        if isinstance(other, ExactMagnitude):
            if self.is_one() and other.is_one():
                return True
            return self.base == other.base and self.exponent == other.exponent
        if isinstance(other, (int, Fraction)):
            if other == 1:
                return self.is_one()
            return self.exponent.denominator == 1 and Fraction(self.base) ** int(self.exponent) == other
        return NotImplemented

    def __hash__(self):
        if self.is_one():
            return hash(1)
        return hash((self.base, self.exponent))

    def __lt__(self, other):
        if not isinstance(other, ExactMagnitude):
            return NotImplemented
        if self.base == other.base or self.is_one() or other.is_one():
            return self.exponent < other.exponent
        # different bases: no exact comparison available
        return self.log() < other.log()

    def __le__(self, other):
        return self == other or self < other

    def __gt__(self, other):
        return other < self

    def __ge__(self, other):
        return other <= self

    def as_fraction(self) -> Fraction:
        """Exact value when the exponent is an integer."""
        if self.exponent.denominator != 1:
            raise ValueError(f"{self} is not rational")
        return Fraction(self.base) ** int(self.exponent)

    def __repr__(self):
        return f"ExactMagnitude({self.base}^({self.exponent}))"

    def __str__(self):
        return f"{self.base}^({self.exponent})"
