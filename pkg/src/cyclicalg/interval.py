"""Midpoint-radius balls with exact dyadic centers.

Centers are rationals rounded to the grid ``2**-prec``; every rounding adds
its error to the radius, so a ball always encloses the exact value it stands
for.  No floating point is involved anywhere, which keeps results
bit-identical across processes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

ZERO = Fraction(0)


class InsufficientPrecision(ArithmeticError):
    """An enclosure is too wide to decide a comparison."""


def digits_to_bits(digits: int) -> int:
    return int(math.ceil(digits * math.log2(10))) + 16


def _round_nearest(q: Fraction, prec: int) -> Fraction:
    scale = 1 << prec
    if (scale % q.denominator) == 0:
        return q
    n = q.numerator * scale
    d = q.denominator
    r = (2 * n + d) // (2 * d)
    return Fraction(r, scale)


def _round_up(q: Fraction, prec: int) -> Fraction:
    scale = 1 << prec
    if (scale % q.denominator) == 0:
        return q
    return Fraction(-((-q.numerator * scale) // q.denominator), scale)


def _round_down(q: Fraction, prec: int) -> Fraction:
    scale = 1 << prec
    if (scale % q.denominator) == 0:
        return q
    return Fraction((q.numerator * scale) // q.denominator, scale)


def sqrt_upper(q: Fraction, prec: int) -> Fraction:
    """Upper bound for sqrt(q) on the grid 2**-prec."""
    if q <= 0:
        return ZERO
    scale = 1 << prec
    # sqrt(q) * scale = sqrt(q * scale^2)
    n = q.numerator * scale * scale
    d = q.denominator
    s = math.isqrt(n // d)
    while Fraction(s * s) < Fraction(n, d):
        s += 1
    return Fraction(s, scale)


def sqrt_lower(q: Fraction, prec: int) -> Fraction:
    if q <= 0:
        return ZERO
    scale = 1 << prec
    n = q.numerator * scale * scale
    d = q.denominator
    s = math.isqrt(n // d)
    return Fraction(s, scale)


@dataclass(frozen=True)
class RealInterval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, q) -> bool:
        return self.lo <= q <= self.hi

    def overlaps(self, other: RealInterval) -> bool:
        return not (self.hi < other.lo or other.hi < self.lo)

    def certainly_ge(self, threshold) -> bool:
        """True if every point is >= threshold; raises if undecided."""
        threshold = Fraction(threshold)
        if self.lo >= threshold:
            return True
        if self.hi < threshold:
            return False
        raise InsufficientPrecision(
            f"interval [{self.lo}, {self.hi}] straddles {threshold}")

    def to_strings(self, digits: int = 20) -> tuple[str, str]:
        return (format_decimal(self.lo, digits, "down"),
                format_decimal(self.hi, digits, "up"))


@dataclass(frozen=True)
class ComplexBall:
    """Closed disk ``{z : |z - (re + i*im)| <= rad}``."""

    re: Fraction
    im: Fraction
    rad: Fraction = ZERO

    @classmethod
    def exact(cls, re, im=0) -> ComplexBall:
        return cls(Fraction(re), Fraction(im), ZERO)

    def __add__(self, other: ComplexBall) -> ComplexBall:
        return ComplexBall(self.re + other.re, self.im + other.im,
                           self.rad + other.rad)

    def __sub__(self, other: ComplexBall) -> ComplexBall:
        return ComplexBall(self.re - other.re, self.im - other.im,
                           self.rad + other.rad)

    def __neg__(self) -> ComplexBall:
        return ComplexBall(-self.re, -self.im, self.rad)

    def scale(self, q: Fraction) -> ComplexBall:
        return ComplexBall(self.re * q, self.im * q, self.rad * abs(q))

    def mul(self, other: ComplexBall, prec: int) -> ComplexBall:
        re = self.re * other.re - self.im * other.im
        im = self.re * other.im + self.im * other.re
        rad = ZERO
        if self.rad or other.rad:
            rad = (self.abs_upper(prec) * other.rad
                   + other.abs_upper(prec) * self.rad
                   + self.rad * other.rad)
        return ComplexBall(re, im, rad).rounded(prec)

    def div(self, other: ComplexBall, prec: int) -> ComplexBall:
        """Division; only used on exact centers during root refinement."""
        n2 = other.re * other.re + other.im * other.im
        if n2 == 0:
            raise ZeroDivisionError("ball division by zero center")
        re = (self.re * other.re + self.im * other.im) / n2
        im = (self.im * other.re - self.re * other.im) / n2
        return ComplexBall(re, im).rounded(prec)

    def rounded(self, prec: int) -> ComplexBall:
        re = _round_nearest(self.re, prec)
        im = _round_nearest(self.im, prec)
        err = self.rad
        if re != self.re:
            err += Fraction(1, 1 << (prec + 1))
        if im != self.im:
            err += Fraction(1, 1 << (prec + 1))
        return ComplexBall(re, im, _round_up(err, prec) if err else ZERO)

    def abs2_center(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def abs_upper(self, prec: int) -> Fraction:
        return sqrt_upper(self.abs2_center(), prec) + self.rad

    def abs_lower(self, prec: int) -> Fraction:
        v = sqrt_lower(self.abs2_center(), prec) - self.rad
        return v if v > 0 else ZERO

    def abs2(self, prec: int) -> RealInterval:
        """Enclosure of ``|z|**2`` over the disk."""
        if not self.rad:
            v = self.abs2_center()
            return RealInterval(v, v)
        lo = self.abs_lower(prec)
        hi = self.abs_upper(prec)
        return RealInterval(_round_down(lo * lo, prec), _round_up(hi * hi, prec))

    def contains(self, re, im=0) -> bool:
        dr = Fraction(re) - self.re
        di = Fraction(im) - self.im
        return dr * dr + di * di <= self.rad * self.rad

    def to_complex(self) -> complex:
        return complex(float(self.re), float(self.im))


def format_decimal(q: Fraction, digits: int, direction: str = "nearest") -> str:
    """Decimal string with ``digits`` fractional digits, rounded as asked."""
    scale = 10 ** digits
    n = q.numerator * scale
    d = q.denominator
    if direction == "down":
        v = n // d
    elif direction == "up":
        v = -((-n) // d)
    else:
        v = (2 * n + d) // (2 * d)
    sign = "-" if v < 0 else ""
    v = abs(v)
    whole, frac = divmod(v, scale)
    if digits == 0:
        return f"{sign}{whole}"
    return f"{sign}{whole}.{frac:0{digits}d}"
