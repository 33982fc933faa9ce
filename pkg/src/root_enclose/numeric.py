"""Exact rational scalars and intervals.

All verification arithmetic in this package goes through this module so that
exactness lives in one place.  The scalar type is the stdlib
``fractions.Fraction`` (re-exported as ``Rational``): arbitrary precision,
always stored reduced with a positive denominator, so equality is structural.
The solver's float fast path deliberately does not use this module.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from ._kernels import geom_sum_pair, pow_pair

Rational = Fraction

_RATIONAL_RE = re.compile(r"-?[0-9]+(?:/[0-9]+)?\Z")


def parse_rational(text: str) -> Fraction:
    """Parse the strict text form: optional '-', digits, optional '/digits'.

    No whitespace, no '+', no decimals; a zero denominator is rejected.
    """
    if not isinstance(text, str) or not _RATIONAL_RE.match(text):
        raise ValueError(f"not a rational literal: {text!r}")
    if "/" in text:
        num, _, den = text.partition("/")
        if int(den) == 0:
            raise ValueError(f"zero denominator: {text!r}")
        return Fraction(int(num), int(den))
    return Fraction(int(text))


def format_rational(value: Fraction) -> str:
    """Reduced text form with positive denominator ('a' or 'a/b')."""
    return str(Fraction(value))


def as_rational(value) -> Fraction:
    """Coerce ints and Fractions; floats are rejected to keep things exact."""
    if isinstance(value, float):
        raise TypeError(f"refusing to coerce float {value!r} to an exact rational")
    return Fraction(value)


def pow_int(base: Fraction, k: int) -> Fraction:
    """base**k for integer k >= 0, with 0**0 == 1."""
    if k < 0:
        raise ValueError("negative exponent")
    base = as_rational(base)
    num, den = pow_pair(base.numerator, base.denominator, k)
    return Fraction(num, den)


def geom_sum(a: Fraction, b: Fraction, n: int) -> Fraction:
    """a**(n-1) + a**(n-2)*b + ... + b**(n-1)  (n terms, n >= 1).

    Multiplying by (a - b) telescopes to a**n - b**n; with (a, b) = (L, U)
    this is the secant denominator of the refinement maps.
    """
    if n < 1:
        raise ValueError("geom_sum needs n >= 1")
    a = as_rational(a)
    b = as_rational(b)
    num, den = geom_sum_pair(a.numerator, a.denominator, b.numerator, b.denominator, n)
    return Fraction(num, den)


@dataclass(frozen=True)
class Interval:
    """Closed interval [lo, hi] of rationals with 0 < lo <= hi."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", as_rational(self.lo))
        object.__setattr__(self, "hi", as_rational(self.hi))
        if not 0 < self.lo <= self.hi:
            raise ValueError(f"invalid interval [{self.lo}, {self.hi}]")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def scaled(self, s: Fraction) -> "Interval":
        """[s*lo, s*hi] for s > 0."""
        return Interval(self.lo * s, self.hi * s)

    def __str__(self) -> str:
        return f"[{self.lo}, {self.hi}]"


def width(interval: Interval) -> Fraction:
    """hi - lo; the refinement loop's termination measure."""
    return interval.hi - interval.lo
