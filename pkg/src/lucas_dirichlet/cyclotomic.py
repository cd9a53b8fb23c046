"""Exact arithmetic in cyclotomic fields Q(zeta_N).

Elements keep the redundant power basis zeta^0 .. zeta^{N-1} (only
zeta^N = 1 is applied on the fly).  Zero testing and equality reduce
modulo the N-th cyclotomic polynomial.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import mpmath
from mpmath import mp


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, lowest degree first."""
    if n < 1:
        raise ValueError("n must be positive")
    # x^n - 1 divided by Phi_d for every proper divisor d
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly = _exact_divide(poly, list(cyclotomic_polynomial(d)))
    return tuple(poly)


def _exact_divide(num: list[int], den: list[int]) -> list[int]:
    num = num[:]
    out = [0] * (len(num) - len(den) + 1)
    lead = den[-1]
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1]
        if c % lead:
            raise ArithmeticError("inexact polynomial division")
        c //= lead
        out[i] = c
        for j, dj in enumerate(den):
            num[i + j] -= c * dj
    if any(num[: len(den) - 1]):
        raise ArithmeticError("non-zero remainder")
    return out


def _reduce_mod_cyclotomic(coeffs: Sequence[Fraction], n: int) -> list[Fraction]:
    phi = cyclotomic_polynomial(n)
    deg = len(phi) - 1
    if all(c.denominator == 1 for c in coeffs):
        # integer coefficients (Gauss sums, character values) avoid Fraction overhead
        rem = [int(c) for c in coeffs]
    else:
        rem = list(coeffs)
    for i in range(len(rem) - 1, deg - 1, -1):
        c = rem[i]
        if c:
            # phi is monic
            for j in range(deg + 1):
                rem[i - deg + j] -= c * phi[j]
    return [Fraction(c) for c in rem[:deg]]


class CyclotomicElement:
    """sum_k coeffs[k] * zeta_order^k with rational coefficients."""

    __slots__ = ("order", "coeffs", "_reduced")

    def __init__(self, order: int, coeffs: Sequence = ()):
        if order < 1:
            raise ValueError("order must be positive")
        c = [Fraction(0)] * order
        for k, v in enumerate(coeffs):
            if v:
                c[k % order] += Fraction(v)
        self.order = order
        self.coeffs = tuple(c)
        self._reduced = None

    @classmethod
    def zero(cls, order: int = 1) -> CyclotomicElement:
        return cls(order)

    @classmethod
    def one(cls, order: int = 1) -> CyclotomicElement:
        return cls.root(order, 0)

    @classmethod
    def root(cls, order: int, exponent: int, coefficient: Fraction | int = 1) -> CyclotomicElement:
        c = [0] * order
        c[exponent % order] = coefficient
        return cls(order, c)

    @classmethod
    def rational(cls, value, order: int = 1) -> CyclotomicElement:
        return cls.root(order, 0, Fraction(value))

    def lift(self, order: int) -> CyclotomicElement:
        """Re-express in Q(zeta_order); ``self.order`` must divide ``order``."""
        if order % self.order:
            raise ValueError(f"{self.order} does not divide {order}")
        step = order // self.order
        c = [Fraction(0)] * order
        for k, v in enumerate(self.coeffs):
            c[k * step] = v
        return CyclotomicElement(order, c)

    def _common(self, other) -> tuple[CyclotomicElement, CyclotomicElement]:
        if isinstance(other, (int, Fraction)):
            other = CyclotomicElement.rational(other, self.order)
        if not isinstance(other, CyclotomicElement):
            raise TypeError(f"cannot combine with {type(other).__name__}")
        n = math.lcm(self.order, other.order)
        return self.lift(n), other.lift(n)

    def __add__(self, other):
        a, b = self._common(other)
        return CyclotomicElement(a.order, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicElement(self.order, [-x for x in self.coeffs])

    def __sub__(self, other):
        a, b = self._common(other)
        return CyclotomicElement(a.order, [x - y for x, y in zip(a.coeffs, b.coeffs)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._common(other)
        n = a.order
        out = [Fraction(0)] * n
        bnz = [(j, y) for j, y in enumerate(b.coeffs) if y]
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in bnz:
                    out[(i + j) % n] += x * y
        return CyclotomicElement(n, out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative powers not supported")
        result = CyclotomicElement.one(self.order)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def conjugate(self) -> CyclotomicElement:
        """Complex conjugation zeta -> zeta^{-1}."""
        n = self.order
        return CyclotomicElement(n, [self.coeffs[(-k) % n] for k in range(n)])

    def reduced(self) -> tuple[Fraction, ...]:
        if self._reduced is None:
            self._reduced = tuple(_reduce_mod_cyclotomic(self.coeffs, self.order))
        return self._reduced

    def is_zero(self) -> bool:
        return not any(self.reduced())

    def as_rational(self) -> Fraction | None:
        """The rational value if the element lies in Q, else None."""
        r = self.reduced()
        if any(r[1:]):
            return None
        return r[0] if r else Fraction(0)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, CyclotomicElement)):
            return (self - other).is_zero()
        return NotImplemented

    def __hash__(self):
        return hash((self.order, self.reduced()))

    def to_mpc(self, prec: int | None = None) -> mpmath.mpc:
        prec = prec or mp.prec
        with mp.workprec(prec + 10):
            total = mpmath.mpc(0)
            for k, v in enumerate(self.coeffs):
                if v:
                    total += (mpmath.mpf(v.numerator) / v.denominator) * mpmath.expjpi(
                        mpmath.mpf(2 * k) / self.order
                    )
        with mp.workprec(prec):
            return +total

    def __repr__(self):
        terms = [f"{v}*z^{k}" for k, v in enumerate(self.coeffs) if v]
        return f"Cyclotomic[{self.order}](" + (" + ".join(terms) or "0") + ")"
