"""Dirichlet characters mod q, Gauss sums, and additive characters."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import mpmath
from mpmath import mp

from .cyclotomic import CyclotomicElement
from .errors import DivisibilityError, MixedModuli, PartialProductBound, ZeroCharacterValue


def factorize(n: int) -> list[tuple[int, int]]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def euler_phi(n: int) -> int:
    result = n
    for p, _ in factorize(n):
        result = result // p * (p - 1)
    return result


def _multiplicative_order(g: int, m: int) -> int:
    k, x = 1, g % m
    while x != 1:
        x = x * g % m
        k += 1
    return k


def _crt_lift(residue: int, modulus: int, q: int) -> int:
    """x with x = residue (mod modulus) and x = 1 (mod q/modulus)."""
    other = q // modulus
    if other == 1:
        return residue % q
    # x = residue + modulus * t, need modulus*t = 1 - residue (mod other)
    t = ((1 - residue) * pow(modulus, -1, other)) % other
    return (residue + modulus * t) % q


@dataclass(frozen=True)
class UnitGroupStructure:
    modulus: int
    factors: tuple[tuple[int, int], ...]  # (generator mod q, order)
    dlog: dict = field(repr=False, compare=False)  # unit -> exponent vector

    @property
    def order(self) -> int:
        return math.prod(o for _, o in self.factors)


@lru_cache(maxsize=None)
def unit_group(q: int) -> UnitGroupStructure:
    """Cyclic decomposition of (Z/qZ)^* via CRT over prime powers."""
    if q < 2:
        raise ValueError("modulus must be at least 2")
    local: list[tuple[int, int]] = []
    for p, e in factorize(q):
        pe = p ** e
        if p == 2:
            if e == 2:
                local.append((_crt_lift(3, pe, q), 2))
            elif e >= 3:
                local.append((_crt_lift(pe - 1, pe, q), 2))
                local.append((_crt_lift(5, pe, q), 2 ** (e - 2)))
            continue
        phi = pe // p * (p - 1)
        g = next(g for g in range(2, pe) if g % p and _multiplicative_order(g, pe) == phi)
        local.append((_crt_lift(g, pe, q), phi))
    factors = tuple(local)
    dlog: dict[int, tuple[int, ...]] = {}
    for exps in itertools.product(*(range(o) for _, o in factors)):
        x = 1
        for (g, _), k in zip(factors, exps):
            x = x * pow(g, k, q) % q
        if x in dlog:
            raise ArithmeticError(f"generators for mod {q} are not independent")
        dlog[x] = exps
    if len(dlog) != euler_phi(q):
        raise ArithmeticError(f"unit group decomposition of {q} is incomplete")
    return UnitGroupStructure(q, factors, dlog)


@dataclass(frozen=True)
class DirichletCharacter:
    """chi mod q given by exponents on the cyclic factors of the unit group.

    ``table[x]`` is the exponent k with chi(x) = zeta_{phi(q)}^k, or None
    when gcd(x, q) > 1.
    """

    modulus: int
    exponents: tuple[int, ...]
    table: tuple = field(repr=False, compare=False)

    @property
    def value_order(self) -> int:
        return euler_phi(self.modulus)

    @property
    def is_principal(self) -> bool:
        return not any(self.exponents)

    @property
    def is_real(self) -> bool:
        half = self.value_order
        return all(k is None or (2 * k) % half == 0 for k in self.table)

    def __call__(self, n: int) -> CyclotomicElement:
        return char_value(self, n)

    def complex_value(self, n: int, prec: int | None = None) -> mpmath.mpc:
        k = self.table[n % self.modulus]
        if k is None:
            return mpmath.mpc(0)
        prec = prec or mp.prec
        with mp.workprec(prec + 10):
            v = mpmath.expjpi(mpmath.mpf(2 * k) / self.value_order)
        with mp.workprec(prec):
            return +v

    def integer_value(self, n: int) -> int:
        """Value as an integer in {-1, 0, 1}; only for real characters."""
        k = self.table[n % self.modulus]
        if k is None:
            return 0
        if k == 0:
            return 1
        if 2 * k == self.value_order:
            return -1
        raise ValueError("character is not real-valued")

    def label(self) -> str:
        chars = enumerate_characters(self.modulus)
        return f"{self.modulus}:{chars.index(self)}"


def _make_character(group: UnitGroupStructure, exps: tuple[int, ...]) -> DirichletCharacter:
    q = group.modulus
    phi = euler_phi(q)
    table: list[int | None] = [None] * q
    for x, vec in group.dlog.items():
        k = 0
        for (_, order), a, e in zip(group.factors, exps, vec):
            k += a * e * (phi // order)
        table[x] = k % phi
    return DirichletCharacter(q, exps, tuple(table))


@lru_cache(maxsize=None)
def _characters(q: int) -> tuple[DirichletCharacter, ...]:
    group = unit_group(q)
    return tuple(
        _make_character(group, exps)
        for exps in itertools.product(*(range(o) for _, o in group.factors))
    )


def enumerate_characters(q: int) -> list[DirichletCharacter]:
    """All phi(q) characters; principal first, then lexicographic exponent vectors."""
    return list(_characters(q))


def principal_character(q: int) -> DirichletCharacter:
    return _characters(q)[0]


def quadratic_character(q: int) -> DirichletCharacter:
    """First real non-principal character mod q in enumeration order."""
    for chi in _characters(q):
        if not chi.is_principal and chi.is_real:
            return chi
    raise ValueError(f"no real non-principal character modulo {q}")


def parse_character(spec: str) -> DirichletCharacter:
    """``q:index`` or ``q:quadratic`` (also ``q:principal``)."""
    q_text, _, which = spec.partition(":")
    q = int(q_text)
    if which == "quadratic":
        return quadratic_character(q)
    if which == "principal":
        return principal_character(q)
    return _characters(q)[int(which)]


def char_value(chi: DirichletCharacter, n: int) -> CyclotomicElement:
    k = chi.table[n % chi.modulus]
    if k is None:
        return CyclotomicElement.zero(chi.value_order)
    return CyclotomicElement.root(chi.value_order, k)


def can_define_mod(chi: DirichletCharacter, divisor: int) -> bool:
    """True iff chi is trivial on every unit congruent to 1 mod ``divisor``."""
    q = chi.modulus
    if divisor <= 0 or q % divisor:
        raise DivisibilityError(f"{divisor} does not divide {q}")
    for x in range(1, q + 1, divisor):
        k = chi.table[x % q]
        if k is not None and k != 0:
            return False
    return True


def gauss_order(q: int) -> int:
    return math.lcm(q, euler_phi(q))


def gauss_sum(chi: DirichletCharacter, n: int) -> CyclotomicElement:
    """tau(chi, n) = sum over x mod q of chi(x) zeta_q^{n x}, exactly."""
    q = chi.modulus
    order = gauss_order(q)
    step_chi = order // chi.value_order
    step_q = order // q
    coeffs = [0] * order
    for x in range(q):
        k = chi.table[x]
        if k is None:
            continue
        coeffs[(k * step_chi + n * x * step_q) % order] += 1
    return CyclotomicElement(order, coeffs)


def gauss_vanishing_check(chi: DirichletCharacter, a: int) -> tuple[bool, bool]:
    """(predicted, actual): predicted when chi cannot be defined mod q/gcd(a, q)."""
    q = chi.modulus
    g = math.gcd(a, q)
    predicted = not can_define_mod(chi, q // g)
    actual = gauss_sum(chi, a).is_zero()
    return predicted, actual


def check_common_modulus(chis: Sequence[DirichletCharacter]) -> int:
    moduli = {c.modulus for c in chis}
    if len(moduli) != 1:
        raise MixedModuli(f"characters have different moduli: {sorted(moduli)}")
    (q,) = moduli
    return q


def weight_table(chis: Sequence[DirichletCharacter]):
    """Exact weights chi_1(r_1) chi_2(r_1+r_2) ... over r in [1, q]^d.

    Yields ``(r_tuple, CyclotomicElement)`` for every tuple with a non-zero weight.
    """
    q = check_common_modulus(chis)
    for rs in itertools.product(range(1, q + 1), repeat=len(chis)):
        total = 0
        w = None
        for chi, r in zip(chis, rs):
            total += r
            v = char_value(chi, total)
            if v.is_zero():
                w = None
                break
            w = v if w is None else w * v
        else:
            yield rs, w


# -- additive characters ------------------------------------------------

ExactComplex = tuple[Fraction, Fraction]


def _cmul(a: ExactComplex, b: ExactComplex) -> ExactComplex:
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _cpow(z: ExactComplex, n: int) -> ExactComplex:
    if n < 0:
        den = z[0] ** 2 + z[1] ** 2
        z = (z[0] / den, -z[1] / den)
        n = -n
    result: ExactComplex = (Fraction(1), Fraction(0))
    while n:
        if n & 1:
            result = _cmul(result, z)
        n >>= 1
        if n:
            z = _cmul(z, z)
    return result


@dataclass(frozen=True)
class AdditiveCharacter:
    """n -> f(1)^n.  Exact when built from rational real/imaginary parts."""

    exact: ExactComplex | None = None
    approx: mpmath.mpc | None = None

    def __post_init__(self):
        if self.exact is None and self.approx is None:
            raise ValueError("need an exact or approximate value")
        if self.exact is not None and not (self.exact[0] or self.exact[1]):
            raise ZeroCharacterValue("f(1) must be non-zero")
        if self.exact is None and self.approx == 0:
            raise ZeroCharacterValue("f(1) must be non-zero")

    @classmethod
    def rational(cls, value) -> AdditiveCharacter:
        return cls(exact=(Fraction(value), Fraction(0)))

    @classmethod
    def gaussian(cls, re, im) -> AdditiveCharacter:
        return cls(exact=(Fraction(re), Fraction(im)))

    @classmethod
    def from_complex(cls, value) -> AdditiveCharacter:
        return cls(approx=mpmath.mpc(value))

    @property
    def is_rational(self) -> bool:
        return self.exact is not None and self.exact[1] == 0

    def rational_value(self) -> Fraction:
        if not self.is_rational:
            raise ValueError("f(1) is not rational")
        return self.exact[0]

    def value(self, prec: int | None = None) -> mpmath.mpc:
        if self.exact is None:
            return mpmath.mpc(self.approx)
        prec = prec or mp.prec
        with mp.workprec(prec):
            re, im = self.exact
            return mpmath.mpc(
                mpmath.mpf(re.numerator) / re.denominator,
                mpmath.mpf(im.numerator) / im.denominator,
            )

    def __str__(self):
        if self.exact is not None:
            re, im = self.exact
            return str(re) if not im else f"{re}+{im}i"
        return mpmath.nstr(self.approx, 15)


def parse_additive(text: str) -> AdditiveCharacter:
    """Rational ``a/b``, Gaussian ``a/b+c/di`` style, or ``i``/``-i``."""
    t = text.strip().replace(" ", "")
    if t in ("i", "+i"):
        return AdditiveCharacter.gaussian(0, 1)
    if t == "-i":
        return AdditiveCharacter.gaussian(0, -1)
    if t.endswith("i"):
        body = t[:-1]
        # split at the last sign that is not leading
        cut = max(body.rfind("+"), body.rfind("-"))
        if cut <= 0:
            return AdditiveCharacter.gaussian(0, Fraction(body or "1"))
        im_text = body[cut:]
        if im_text in ("+", "-"):
            im_text += "1"
        return AdditiveCharacter.gaussian(Fraction(body[:cut]), Fraction(im_text))
    return AdditiveCharacter.rational(Fraction(t))


def additive_eval(f: AdditiveCharacter, n: int):
    """f(1)^n: an exact ``(re, im)`` pair of Fractions when possible, else an mpc."""
    if f.exact is not None:
        return _cpow(f.exact, n)
    return mpmath.power(f.approx, n)


@dataclass(frozen=True)
class AdditiveTuple:
    characters: tuple[AdditiveCharacter, ...]

    def __init__(self, characters: Sequence[AdditiveCharacter]):
        object.__setattr__(self, "characters", tuple(characters))
        if not self.characters:
            raise ValueError("need at least one additive character")

    @property
    def depth(self) -> int:
        return len(self.characters)

    def partial_product(self, j: int, prec: int | None = None) -> mpmath.mpc:
        """g_j^d = f_j(1) ... f_d(1), 1-based j."""
        prod = mpmath.mpc(1)
        with mp.workprec((prec or mp.prec) + 10):
            for f in self.characters[j - 1:]:
                prod *= f.value(prec)
        return prod

    def partial_product_exact(self, j: int) -> ExactComplex | None:
        z: ExactComplex = (Fraction(1), Fraction(0))
        for f in self.characters[j - 1:]:
            if f.exact is None:
                return None
            z = _cmul(z, f.exact)
        return z

    def check_partial_products(self) -> None:
        for j in range(1, self.depth + 1):
            exact = self.partial_product_exact(j)
            if exact is not None:
                too_big = exact[0] ** 2 + exact[1] ** 2 > 1
            else:
                too_big = abs(self.partial_product(j)) > 1
            if too_big:
                raise PartialProductBound(f"|g_{j}^{self.depth}| > 1")

    def __str__(self):
        return "(" + ", ".join(str(f) for f in self.characters) + ")"
