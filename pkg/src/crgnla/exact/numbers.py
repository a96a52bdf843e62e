"""Rationals and Gaussian rationals.

Rationals are plain :class:`fractions.Fraction` (always reduced, positive
denominator).  :class:`GaussRat` adds an imaginary part.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

Rat = Fraction


def to_rat(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, GaussRat):
        if x.im:
            raise ValueError(f"{x} is not real")
        return x.re
    raise TypeError(f"cannot convert {type(x).__name__} to a rational")


def rat_str(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class GaussRat:
    """Exact element of Q(i)."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if type(re) is Fraction else Fraction(re)
        self.im = im if type(im) is Fraction else Fraction(im)

    @classmethod
    def coerce(cls, x) -> "GaussRat":
        if isinstance(x, GaussRat):
            return x
        return cls(to_rat(x))

    def conj(self) -> "GaussRat":
        return GaussRat(self.re, -self.im)

    def is_zero(self) -> bool:
        return not self.re and not self.im

    def is_real(self) -> bool:
        return not self.im

    def __bool__(self):
        return not self.is_zero()

    def __add__(self, other):
        if not isinstance(other, GaussRat):
            other = GaussRat.coerce(other)
        return GaussRat(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussRat(-self.re, -self.im)

    def __sub__(self, other):
        if not isinstance(other, GaussRat):
            other = GaussRat.coerce(other)
        return GaussRat(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return GaussRat.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, GaussRat):
            other = GaussRat.coerce(other)
            return GaussRat(self.re * other.re, self.im * other.re)
        a, b, c, d = self.re, self.im, other.re, other.im
        return GaussRat(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def inverse(self) -> "GaussRat":
        n = self.re * self.re + self.im * self.im
        if not n:
            raise ZeroDivisionError("GaussRat division by zero")
        return GaussRat(self.re / n, -self.im / n)

    def __truediv__(self, other):
        return self * GaussRat.coerce(other).inverse()

    def __rtruediv__(self, other):
        return GaussRat.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out, base = GaussRat(1), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, GaussRat):
            return self.re == other.re and self.im == other.im
        try:
            o = GaussRat.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self):
        return f"GaussRat({self})"

    def __str__(self):
        if not self.im:
            return rat_str(self.re)
        if not self.re:
            return "i" if self.im == 1 else ("-i" if self.im == -1 else f"{rat_str(self.im)}i")
        sign = "+" if self.im > 0 else "-"
        im = abs(self.im)
        ims = "i" if im == 1 else f"{rat_str(im)}i"
        return f"({rat_str(self.re)}{sign}{ims})"


ZERO = GaussRat(0)
ONE = GaussRat(1)
I = GaussRat(0, 1)
