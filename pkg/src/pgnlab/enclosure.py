"""Exact rational brackets and outward-rounded logarithms.

All certification in this package reduces to arithmetic on rational
intervals (endpoints are Fractions, often with very large numerators) plus
logarithms taken at a controlled binary precision and widened outward by a
few ulps.  Nothing here assumes anything about the numbers being enclosed.
"""

from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple

import mpmath
from mpmath import mp


class Bracket(NamedTuple):
    lo: Fraction
    hi: Fraction

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi

    def scale(self, k: int) -> "Bracket":
        """The image of the bracket under multiplication by the integer k."""
        if k >= 0:
            return Bracket(k * self.lo, k * self.hi)
        return Bracket(k * self.hi, k * self.lo)

    def shift(self, c) -> "Bracket":
        return Bracket(self.lo + c, self.hi + c)

    def square(self) -> "Bracket":
        if self.lo >= 0:
            return Bracket(self.lo * self.lo, self.hi * self.hi)
        if self.hi <= 0:
            return Bracket(self.hi * self.hi, self.lo * self.lo)
        m = max(-self.lo, self.hi)
        return Bracket(Fraction(0), m * m)


def log_fraction(fr: Fraction, prec: int = 80) -> float:
    """Natural log of a positive rational, as a float (not outward-rounded)."""
    if fr <= 0:
        raise ValueError("log of non-positive rational")
    with mp.workprec(prec):
        return float(mp.log(mp.mpf(fr.numerator)) - mp.log(mp.mpf(fr.denominator)))


def log_abs_bracket(br: Bracket, prec: int = 120) -> tuple[float, float]:
    """Outward-rounded enclosure of log|x| for x in the bracket.

    The bracket must not contain 0.  The returned floats over-cover by a
    couple of ulps of the working precision on each side.
    """
    lo, hi = br
    if lo <= 0 <= hi:
        raise ValueError("bracket straddles zero, log undefined")
    if hi < 0:
        lo, hi = -hi, -lo
    with mp.workprec(prec):
        a = mp.log(mp.mpf(lo.numerator)) - mp.log(mp.mpf(lo.denominator))
        b = mp.log(mp.mpf(hi.numerator)) - mp.log(mp.mpf(hi.denominator))
        pad = mpmath.ldexp(1, -prec + 6) * (1 + abs(a) + abs(b))
        return (float(a - pad), float(b + pad))


def bracket_max(intervals) -> tuple[float, float]:
    """Interval maximum: (max of lows, max of highs)."""
    los, his = zip(*intervals)
    return (max(los), max(his))
