"""Exact values at s = -m (m_i positive integers) in Q(sqrt(D)).

At s = -m the binomials C(m_t, k_t) vanish past k_t = m_t, so the continued
series is a finite sum.  With Y_t = Q^{K_t} alpha^{m_d(t) - 2K_t} every factor
lies in Q(sqrt(D)), and D^{-m_d(1)/2} = sqrt(D)^{-m_d(1)} keeps it there.

Galois conjugation sends alpha to beta = Q/alpha and therefore Y_t(k) to
Y_t(k-bar) with k-bar_i = m_i - k_i.  Averaging the sum over all 2^d partial
barrings pairs every term with its conjugate, which is why the value is rational.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .characters import AdditiveTuple, DirichletCharacter, check_common_modulus
from .continuation import run_chain
from .errors import (
    NonQuadraticCharacter,
    NonRationalCharacter,
    NotRational,
    RequiresValidation,
    SingularPoint,
    SquareDiscriminant,
)
from .lucas import LucasParams, alpha_power
from .points import ShiftSpec
from .quadfield import QuadExtNumber, galois_conjugate


@dataclass(frozen=True)
class NegIntPoint:
    """The point s = (-m_1, ..., -m_d)."""

    ms: tuple[int, ...]

    def __init__(self, ms: Sequence[int]):
        ms = tuple(int(m) for m in ms)
        if not ms or any(m < 1 for m in ms):
            raise ValueError("every m_i must be a positive integer")
        object.__setattr__(self, "ms", ms)

    @property
    def depth(self) -> int:
        return len(self.ms)

    def suffix(self, j: int) -> int:
        """m_d(j) = m_j + ... + m_d (1-based)."""
        return sum(self.ms[j - 1:])

    def as_point(self) -> list[int]:
        return [-m for m in self.ms]


def as_neg_point(m) -> NegIntPoint:
    if isinstance(m, NegIntPoint):
        return m
    if isinstance(m, int):
        return NegIntPoint([m])
    return NegIntPoint(m)


@dataclass(frozen=True)
class SpecialValueResult:
    value: QuadExtNumber | None
    singular: bool
    square_discriminant: bool = False

    @property
    def is_rational(self) -> bool:
        return self.value is not None and self.value.is_rational()


@dataclass(frozen=True)
class SymmetrizedTerm:
    """sigma_B(k) = prod_t gamma_t(k^B), where k^B bars the indices in B."""

    k: tuple[int, ...]
    barring: frozenset
    weight: int  # prod_t C(m_t, k_t)
    gammas: tuple[QuadExtNumber, ...]
    sigma: QuadExtNumber


# -- shared exact pieces ---------------------------------------------------


def _y_value(params: LucasParams, k_sum: int, m_suffix: int) -> QuadExtNumber:
    """Y = Q^K alpha^{m - 2K}."""
    return alpha_power(params, m_suffix - 2 * k_sum) * (params.q_param ** k_sum)


def _exact_dot(a, b):
    total = 0
    for x, y in zip(a, b):
        if x and y:
            total = total + x * y
    return total


def _binomial_rows(m: NegIntPoint, kmax: int) -> list[list[int]]:
    return [[(-1) ** k * math.comb(mt, k) for k in range(kmax + 1)] for mt in m.ms]


def _scale(params: LucasParams, m: NegIntPoint) -> QuadExtNumber:
    return params.sqrt_d ** (-m.suffix(1))


def _shifted_phi_rows(params: LucasParams, q: int, residues, m: NegIntPoint, kmax: int):
    """phi_t(K) = Y^{r_t} / (1 - Y^q) for K <= m_d(t), or None on a zero denominator."""
    rows = []
    for t, r in enumerate(residues, start=1):
        top = m.suffix(t)
        row = []
        for k in range(kmax + 1):
            if k > top:
                row.append(0)
                continue
            y = _y_value(params, k, top)
            den = 1 - y ** q
            if den.is_zero():
                return None
            row.append(y ** r / den)
        rows.append({0: row})
    return rows


def _chain_total(binoms, phis, kmax):
    trans = [[(0, 0, 1, 0)] for _ in binoms]
    g1 = run_chain(binoms, phis, trans, kmax, _exact_dot, {0})[0]
    total = 0
    for v in g1:
        if v:
            total = total + v
    return total


def _warn_square(params: LucasParams) -> None:
    if params.d_is_square:
        warnings.warn(
            f"D = {params.d} is a perfect square; the value is exact but rationality "
            "statements do not apply",
            RequiresValidation,
            stacklevel=3,
        )


# -- holomorphy ---------------------------------------------------------------


def denominators_vanish(params: LucasParams, q: int, m) -> bool:
    """Exact scan: some 1 - Y_t(K)^q with K <= m_d(t) equals zero."""
    m = as_neg_point(m)
    for t in range(1, m.depth + 1):
        top = m.suffix(t)
        for k in range(top + 1):
            if (1 - _y_value(params, k, top) ** q).is_zero():
                return True
    return False


def holomorphic_at_neg(params: LucasParams, q: int, m) -> bool:
    """Parity predicate for Q = +-1, always true for other Q when sqrt(D) is irrational.

    A square D falls outside that statement and is decided by the exact scan.
    """
    m = as_neg_point(m)
    suffixes = [m.suffix(j) for j in range(1, m.depth + 1)]
    if params.q_param == 1:
        return all(x % 2 for x in suffixes)
    if params.q_param == -1:
        return all((q * x) % 4 for x in suffixes)
    if not params.d_is_square:
        return True
    return not denominators_vanish(params, q, m)


# -- shifted special values -------------------------------------------------


@lru_cache(maxsize=65536)
def _special_shifted(params: LucasParams, shift: ShiftSpec, m: NegIntPoint) -> SpecialValueResult:
    kmax = m.suffix(1)
    phis = _shifted_phi_rows(params, shift.modulus, shift.residues, m, kmax)
    if phis is None:
        return SpecialValueResult(None, True, params.d_is_square)
    total = _chain_total(_binomial_rows(m, kmax), phis, kmax)
    value = _scale(params, m) * total
    return SpecialValueResult(value, False, params.d_is_square)


def special_zeta_exact(params: LucasParams, shift: ShiftSpec, m, strict: bool = False) -> SpecialValueResult:
    """Exact value of the shifted series at s = -m.

    A vanishing denominator gives ``singular=True`` with no value, or raises
    SingularPoint when ``strict``.
    """
    m = as_neg_point(m)
    if shift.depth != m.depth:
        raise ValueError("shift and point depths differ")
    result = _special_shifted(params, shift, m)
    if result.singular and strict:
        raise SingularPoint(f"a denominator vanishes at s = {m.as_point()}")
    _warn_square(params)
    return result


def _gamma(params: LucasParams, q: int, r: int, k_t: int, k_sum: int, top: int) -> QuadExtNumber:
    y = _y_value(params, k_sum, top)
    return (-1) ** k_t * y ** r / (1 - y ** q)


def symmetrized_special_zeta(
    params: LucasParams, shift: ShiftSpec, m
) -> tuple[SpecialValueResult, list[SymmetrizedTerm]]:
    """The 2^d-fold barring average of the finite sum, with its sigma terms."""
    m = as_neg_point(m)
    d = m.depth
    if shift.depth != d:
        raise ValueError("shift and point depths differ")
    if denominators_vanish(params, shift.modulus, m):
        return SpecialValueResult(None, True, params.d_is_square), []
    _warn_square(params)
    q = shift.modulus
    tops = [m.suffix(t) for t in range(1, d + 1)]
    gamma_cache: dict = {}

    def gamma(t, k_t, k_sum):
        key = (t, k_t, k_sum)
        g = gamma_cache.get(key)
        if g is None:
            g = gamma_cache[key] = _gamma(params, q, shift.residues[t], k_t, k_sum, tops[t])
        return g

    terms = []
    total = 0
    barrings = [frozenset(c) for size in range(d + 1) for c in itertools.combinations(range(d), size)]
    for k in itertools.product(*(range(mt + 1) for mt in m.ms)):
        weight = math.prod(math.comb(mt, kt) for mt, kt in zip(m.ms, k))
        for bar in barrings:
            kb = [m.ms[i] - k[i] if i in bar else k[i] for i in range(d)]
            sums = list(itertools.accumulate(reversed(kb)))[::-1]
            gammas = tuple(gamma(t, kb[t], sums[t]) for t in range(d))
            sigma = math.prod(gammas[1:], start=gammas[0])
            terms.append(SymmetrizedTerm(tuple(k), bar, weight, gammas, sigma))
            total = total + weight * sigma
    value = _scale(params, m) * total / (2 ** d)
    return SpecialValueResult(value, False, params.d_is_square), terms


def galois_audit(terms: Sequence[SymmetrizedTerm], m) -> bool:
    """psi(sigma_B(k)) == (-1)^{m_d(1)} sigma_{complement of B}(k) for every term."""
    m = as_neg_point(m)
    d = m.depth
    sign = (-1) ** m.suffix(1)
    everything = frozenset(range(d))
    index = {(t.k, t.barring): t for t in terms}
    for t in terms:
        partner = index.get((t.k, everything - t.barring))
        if partner is None:
            return False
        if galois_conjugate(t.sigma) != sign * partner.sigma:
            return False
    return True


def assert_rational(result: SpecialValueResult) -> Fraction:
    if result.singular:
        raise SingularPoint("the point is singular")
    if result.square_discriminant:
        raise SquareDiscriminant("rationality is only asserted when sqrt(D) is irrational")
    if not result.value.is_rational():
        raise NotRational(f"value {result.value} has a non-zero sqrt(D) part")
    return result.value.rational


# -- characters -------------------------------------------------------------------


def special_L_quadratic(params: LucasParams, chis: Sequence[DirichletCharacter], m) -> Fraction:
    """sum over r of chi_1(r_1) ... chi_d(r_1 + ... + r_d) times the shifted values."""
    m = as_neg_point(m)
    q = check_common_modulus(chis)
    if len(chis) != m.depth:
        raise ValueError("need one character per coordinate")
    for chi in chis:
        if not chi.is_real:
            raise NonQuadraticCharacter(f"character {chi.label()} is not real-valued")
    if params.d_is_square:
        raise SquareDiscriminant("rationality is only asserted when sqrt(D) is irrational")
    total = QuadExtNumber(0, 0, params.radicand)
    for rs in itertools.product(range(1, q + 1), repeat=m.depth):
        w = 1
        run = 0
        for chi, r in zip(chis, rs):
            run += r
            w *= chi.integer_value(run)
            if not w:
                break
        if not w:
            continue
        result = _special_shifted(params, ShiftSpec(q, rs), m)
        if result.singular:
            raise SingularPoint(f"a denominator vanishes at s = {m.as_point()}")
        total = total + w * result.value
    return assert_rational(SpecialValueResult(total, False, False))


def special_additive_exact(params: LucasParams, fs: AdditiveTuple, m) -> SpecialValueResult:
    """Finite-sum value of the additive series at s = -m for rational f_i(1)."""
    m = as_neg_point(m)
    if fs.depth != m.depth:
        raise ValueError("need one additive character per coordinate")
    for f in fs.characters:
        if not f.is_rational:
            raise NonRationalCharacter(f"f(1) = {f} is not rational")
    kmax = m.suffix(1)
    phis = []
    for t in range(1, m.depth + 1):
        g = fs.partial_product_exact(t)[0]
        top = m.suffix(t)
        row = []
        for k in range(kmax + 1):
            if k > top:
                row.append(0)
                continue
            gy = _y_value(params, k, top) * g
            den = 1 - gy
            if den.is_zero():
                return SpecialValueResult(None, True, params.d_is_square)
            row.append(gy / den)
        phis.append({0: row})
    total = _chain_total(_binomial_rows(m, kmax), phis, kmax)
    return SpecialValueResult(_scale(params, m) * total, False, params.d_is_square)


def special_additive(params: LucasParams, fs: AdditiveTuple, m) -> Fraction:
    for f in fs.characters:
        if not f.is_rational:
            raise NonRationalCharacter(f"f(1) = {f} is not rational")
    fs.check_partial_products()
    if params.d_is_square:
        raise SquareDiscriminant("rationality is only asserted when sqrt(D) is irrational")
    return assert_rational(special_additive_exact(params, fs, m))
