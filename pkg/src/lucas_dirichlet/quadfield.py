"""Exact arithmetic in a real quadratic field Q(sqrt(N)).

Elements are ``a + b*sqrt(N)`` with rational ``a, b`` (``fractions.Fraction``)
and a positive integer radicand ``N``.  When ``N`` is a perfect square the
surd is folded into the rational part, so every element has a well defined
inverse as long as it is non-zero.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Union

import mpmath
from mpmath import mp

Rational = Union[int, Fraction]


def format_rational(x: Fraction) -> str:
    """Canonical ``num/den`` string (lowest terms, positive denominator)."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(text: str) -> Fraction:
    return Fraction(text.strip())


def _isqrt_exact(n: int) -> int | None:
    if n < 0:
        return None
    r = math.isqrt(n)
    return r if r * r == n else None


class QuadExtNumber:
    """An element ``rational + surd*sqrt(radicand)`` of Q(sqrt(radicand))."""

    __slots__ = ("rational", "surd", "radicand")

    def __init__(self, rational: Rational = 0, surd: Rational = 0, radicand: int = 1):
        if not isinstance(radicand, int) or radicand <= 0:
            raise ValueError(f"radicand must be a positive integer, got {radicand!r}")
        a = Fraction(rational)
        b = Fraction(surd)
        root = _isqrt_exact(radicand)
        if root is not None and b:
            a += b * root
            b = Fraction(0)
        object.__setattr__(self, "rational", a)
        object.__setattr__(self, "surd", b)
        object.__setattr__(self, "radicand", radicand)

    def __setattr__(self, name, value):
        raise AttributeError("QuadExtNumber is immutable")

    # -- coercion -------------------------------------------------------
    def _coerce(self, other) -> QuadExtNumber:
        if isinstance(other, QuadExtNumber):
            if other.radicand != self.radicand:
                raise ValueError(
                    f"cannot combine elements of Q(sqrt({self.radicand})) "
                    f"and Q(sqrt({other.radicand}))"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return QuadExtNumber(other, 0, self.radicand)
        return NotImplemented

    # -- ring operations ------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadExtNumber(self.rational + o.rational, self.surd + o.surd, self.radicand)

    __radd__ = __add__

    def __neg__(self):
        return QuadExtNumber(-self.rational, -self.surd, self.radicand)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadExtNumber(self.rational - o.rational, self.surd - o.surd, self.radicand)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        a, b, c, d = self.rational, self.surd, o.rational, o.surd
        return QuadExtNumber(a * c + b * d * self.radicand, a * d + b * c, self.radicand)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        return self.rational ** 2 - self.surd ** 2 * self.radicand

    def conjugate(self) -> QuadExtNumber:
        return QuadExtNumber(self.rational, -self.surd, self.radicand)

    def inverse(self) -> QuadExtNumber:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in quadratic field")
        return QuadExtNumber(self.rational / n, -self.surd / n, self.radicand)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        base = self if exponent >= 0 else self.inverse()
        e = abs(exponent)
        result = QuadExtNumber(1, 0, self.radicand)
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    # -- predicates -----------------------------------------------------
    def is_zero(self) -> bool:
        return self.rational == 0 and self.surd == 0

    def is_rational(self) -> bool:
        return self.surd == 0

    def __bool__(self):
        return not self.is_zero()

    def sign(self) -> int:
        """Exact sign of the real embedding (sqrt taken positive)."""
        sa = (self.rational > 0) - (self.rational < 0)
        sb = (self.surd > 0) - (self.surd < 0)
        if sa == 0 or sa == sb:
            return sb if sa == 0 else sa
        if sb == 0:
            return sa
        # opposite signs: compare a^2 with b^2 N
        diff = self.rational ** 2 - self.surd ** 2 * self.radicand
        if diff == 0:
            return 0
        return sa if diff > 0 else sb

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.surd == 0 and self.rational == other
        if not isinstance(other, QuadExtNumber):
            return NotImplemented
        return (
            self.radicand == other.radicand
            and self.rational == other.rational
            and self.surd == other.surd
        )

    def __hash__(self):
        if self.surd == 0:
            return hash(self.rational)
        return hash((self.rational, self.surd, self.radicand))

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    # -- conversions ----------------------------------------------------
    def to_mpf(self, prec: int | None = None) -> mpmath.mpf:
        """Real embedding, computed without cancellation when a and b*sqrt(N) have opposite signs."""
        prec = prec or mp.prec
        with mp.workprec(prec + 20):
            a = mpmath.mpf(self.rational.numerator) / self.rational.denominator
            b = mpmath.mpf(self.surd.numerator) / self.surd.denominator
            root = mpmath.sqrt(self.radicand)
            if self.rational * self.surd < 0:
                value = mpmath.mpf(self.norm().numerator) / self.norm().denominator
                value = value / (a - b * root)
            else:
                value = a + b * root
        with mp.workprec(prec):
            return +value

    def __float__(self):
        return float(self.to_mpf(80))

    def __str__(self):
        return f"{format_rational(self.rational)} + {format_rational(self.surd)}*sqrt({self.radicand})"

    def __repr__(self):
        return f"QuadExtNumber({self.rational!s}, {self.surd!s}, radicand={self.radicand})"

    @classmethod
    def parse(cls, text: str) -> QuadExtNumber:
        m = re.fullmatch(
            r"\s*(-?\d+(?:/\d+)?)\s*\+\s*(-?\d+(?:/\d+)?)\s*\*\s*sqrt\((\d+)\)\s*", text
        )
        if not m:
            raise ValueError(f"not a quadratic-field literal: {text!r}")
        return cls(Fraction(m.group(1)), Fraction(m.group(2)), int(m.group(3)))


def galois_conjugate(x: QuadExtNumber) -> QuadExtNumber:
    """The non-trivial automorphism sqrt(N) -> -sqrt(N)."""
    return x.conjugate()


def quad_to_real(x: QuadExtNumber, precision: int) -> tuple[mpmath.mpf, mpmath.mpf]:
    """Round ``x`` to ``precision`` bits; returns ``(value, error_bound)``.

    The bound is two ulps of the result, or zero when the rounded value
    equals ``x`` exactly.
    """
    if precision < 8:
        raise ValueError("precision must be at least 8 bits")
    with mp.workprec(precision):
        value = x.to_mpf(precision)
        value = +value
        if x.is_rational():
            man, exp = value.man_exp if value else (0, 0)
            exact = Fraction(man) * (Fraction(2) ** exp) if value else Fraction(0)
            if exact == x.rational:
                return value, mpmath.mpf(0)
        if not value:
            return value, mpmath.mpf(2) ** (-precision)
        _, e = mpmath.frexp(value)
        return value, 2 * mpmath.ldexp(1, int(e) - precision)
