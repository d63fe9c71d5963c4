"""Exact complex numbers with rational real and imaginary parts."""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational


class GaussRat:
    """a + b i with a, b Fractions. Mixes with ints and Fractions exactly,
    and degrades to ``complex`` when combined with floats or complex."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def _lift(other):
        if isinstance(other, GaussRat):
            return other
        if isinstance(other, Rational):
            return GaussRat(other)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return complex(self) + other
        return GaussRat(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussRat(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return complex(self) * other
        return GaussRat(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return complex(self) / other
        den = o.re * o.re + o.im * o.im
        return GaussRat((self.re * o.re + self.im * o.im) / den, (self.im * o.re - self.re * o.im) / den)

    def __rtruediv__(self, other):
        return GaussRat(other) / self if self._lift(other) is not None else other / complex(self)

    def __pow__(self, k: int):
        out = GaussRat(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            return complex(self) == other
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im)) if self.im else hash(self.re)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __abs__(self):
        return abs(complex(self))

    def conjugate(self):
        return GaussRat(self.re, -self.im)

    def __repr__(self):
        return f"GaussRat({self.re}, {self.im})"


def is_exact(v) -> bool:
    return isinstance(v, (GaussRat, Rational))


def imag_unit_times(v):
    """i * v, exact when v is rational."""
    if isinstance(v, Rational):
        return GaussRat(0, v)
    if isinstance(v, GaussRat):
        return GaussRat(-v.im, v.re)
    return 1j * v


def is_zero(v, tol: float = 1e-12) -> bool:
    if is_exact(v):
        return not v
    return abs(v) < tol
