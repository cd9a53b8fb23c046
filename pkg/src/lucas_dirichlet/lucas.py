"""Lucas sequences of the first kind and their standing parameter hypotheses."""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import mp

from .errors import ConstraintViolated, NonPositiveP, QZero
from .quadfield import QuadExtNumber, Rational, _isqrt_exact

# Prefix length on which positivity and monotonicity are certified at construction.
CERTIFIED_PREFIX = 500


@dataclass(frozen=True)
class LucasParams:
    """A validated pair (P, Q).

    ``sqrt_d`` is the positive square root of D = P^2 - 4Q as an element of
    Q(sqrt(N)) where N = num(D) * den(D); for integer P, Q simply N = D.
    """

    p: Fraction
    q_param: Fraction
    d: Fraction
    alpha: QuadExtNumber
    beta: QuadExtNumber
    sqrt_d: QuadExtNumber
    d_is_square: bool

    @property
    def radicand(self) -> int:
        return self.alpha.radicand

    @property
    def is_fibonacci(self) -> bool:
        return self.p == 1 and self.q_param == -1

    def log_alpha(self, prec: int | None = None) -> mpmath.mpf:
        """ln(alpha) at ``prec`` bits; never cached across precisions."""
        prec = prec or mp.prec
        with mp.workprec(prec + 10):
            value = mpmath.log(self.alpha.to_mpf(prec + 10))
        with mp.workprec(prec):
            return +value

    def log_d(self, prec: int | None = None) -> mpmath.mpf:
        prec = prec or mp.prec
        with mp.workprec(prec + 10):
            value = mpmath.log(mpmath.mpf(self.d.numerator)) - mpmath.log(self.d.denominator)
        with mp.workprec(prec):
            return +value

    def log_abs_q(self, prec: int | None = None) -> mpmath.mpf:
        prec = prec or mp.prec
        q = abs(self.q_param)
        with mp.workprec(prec + 10):
            value = mpmath.log(mpmath.mpf(q.numerator)) - mpmath.log(q.denominator)
        with mp.workprec(prec):
            return +value

    def geometric_ratio(self, prec: int | None = None) -> mpmath.mpf:
        """|Q| / alpha^2, the ratio driving the binomial expansion of U_n^{-s}."""
        prec = prec or mp.prec
        with mp.workprec(prec + 10):
            a = self.alpha.to_mpf(prec + 10)
            value = abs(mpmath.mpf(self.q_param.numerator) / self.q_param.denominator) / (a * a)
        with mp.workprec(prec):
            return +value

    def key(self) -> tuple[Fraction, Fraction]:
        return (self.p, self.q_param)

    def __str__(self):
        return f"(P={self.p}, Q={self.q_param})"


def validate_params(p: Rational | str, q_param: Rational | str) -> LucasParams:
    """Check P > 0, Q != 0 and the Q-versus-(P-1) inequality, then derive alpha, beta."""
    p = Fraction(p)
    q = Fraction(q_param)
    if q == 0:
        raise QZero("Q must be non-zero")
    if p <= 0:
        raise NonPositiveP(f"P must be positive, got {p}")
    if p <= 2 and not q < p - 1:
        raise ConstraintViolated(f"for 0 < P <= 2 need Q < P - 1 = {p - 1}, got Q = {q}")
    if p > 2 and not q <= p - 1:
        raise ConstraintViolated(f"for P > 2 need Q <= P - 1 = {p - 1}, got Q = {q}")

    d = p * p - 4 * q
    radicand = d.numerator * d.denominator
    # sqrt(D) = sqrt(num*den) / den
    sqrt_d = QuadExtNumber(0, Fraction(1, d.denominator), radicand)
    alpha = (sqrt_d + p) / 2
    beta = (p - sqrt_d) / 2
    params = LucasParams(
        p=p,
        q_param=q,
        d=d,
        alpha=alpha,
        beta=beta,
        sqrt_d=sqrt_d,
        d_is_square=_isqrt_exact(radicand) is not None,
    )
    _check_invariants(params)
    return params


def _check_invariants(params: LucasParams) -> None:
    # These follow algebraically from the hypotheses; a failure means a bug.
    a, b = params.alpha, params.beta
    assert params.d > 0
    assert a > 1
    assert a + b == params.p and a * b == params.q_param
    assert a - b == params.sqrt_d
    assert (a - b).sign() > 0 and (a + b).sign() > 0  # |beta| < alpha
    with mp.workprec(128):
        assert params.geometric_ratio(128) < 1


class LucasSequenceCache:
    """Append-only memo of U_0, U_1, ... with a lock around extension."""

    def __init__(self, params: LucasParams, certify: int = CERTIFIED_PREFIX):
        self.params = params
        self._values: list[Fraction] = [Fraction(0), Fraction(1)]
        self._lock = threading.Lock()
        self.monotone_from = None
        if certify:
            self._certify(certify)

    def _extend(self, n: int) -> None:
        with self._lock:
            vals = self._values
            p, q = self.params.p, self.params.q_param
            while len(vals) <= n:
                vals.append(p * vals[-1] - q * vals[-2])

    def __getitem__(self, n: int) -> Fraction:
        if n < 0:
            raise IndexError("Lucas index must be non-negative")
        if n >= len(self._values):
            self._extend(n)
        return self._values[n]

    def __len__(self):
        return len(self._values)

    def _certify(self, upto: int) -> None:
        self._extend(upto)
        vals = self._values
        for n in range(1, upto + 1):
            if not vals[n] > 0:
                raise ConstraintViolated(f"U_{n} = {vals[n]} is not positive for {self.params}")
        # For P >= 1 the sequence is non-decreasing from n = 1.  For P < 1 it
        # can oscillate early (beta < 0 close to -alpha), so only the first
        # index after which it never decreases on the prefix is recorded.
        start = 1
        for n in range(1, upto):
            if vals[n + 1] < vals[n]:
                start = n + 1
        self.monotone_from = start


def lucas_u(cache: LucasSequenceCache, n: int) -> Fraction:
    return cache[n]


_CACHES: dict[tuple[Fraction, Fraction], LucasSequenceCache] = {}
_CACHES_LOCK = threading.Lock()


def sequence_for(params: LucasParams) -> LucasSequenceCache:
    """Shared cache per (P, Q)."""
    key = params.key()
    with _CACHES_LOCK:
        cache = _CACHES.get(key)
        if cache is None:
            cache = _CACHES[key] = LucasSequenceCache(params)
        return cache


def alpha_power(params: LucasParams, exponent: int) -> QuadExtNumber:
    """alpha**exponent exactly; alpha^{-1} = beta / Q."""
    if exponent >= 0:
        return params.alpha ** exponent
    inv = params.beta / params.q_param
    return inv ** (-exponent)


def lucas_closed_form(params: LucasParams, n: int) -> QuadExtNumber:
    """(alpha^n - beta^n) / (alpha - beta) evaluated in Q(sqrt(D))."""
    return (params.alpha ** n - params.beta ** n) / params.sqrt_d
