"""Independent brute-force partial sums and shared strategies for the tests."""

from fractions import Fraction

import mpmath
from hypothesis import strategies as st

from lucas_dirichlet.lucas import lucas_closed_form


def u_real(params, n):
    return lucas_closed_form(params, n).to_mpf()


def shifted_tuples(q, residues, limit):
    """All (M_1, ..., M_d) with M_i - M_{i-1} = q n_i + r_i, n_i >= 0, M_d <= limit."""
    def rec(prev, rest):
        if not rest:
            yield ()
            return
        m = prev + rest[0]
        while m <= limit:
            for tail in rec(m, rest[1:]):
                yield (m,) + tail
            m += q
    yield from rec(0, list(residues))


def brute_sum(params, s, tuples, weight=lambda ms: 1):
    total = mpmath.mpc(0)
    us = {}
    for ms in tuples:
        term = mpmath.mpc(weight(ms))
        if term == 0:
            continue
        for m, z in zip(ms, s):
            if m not in us:
                us[m] = u_real(params, m)
            term *= us[m] ** (-mpmath.mpc(z))
        total += term
    return total


@st.composite
def admissible_pq(draw, max_den=6):
    """Rational (P, Q) satisfying the parameter hypotheses."""
    p = draw(st.fractions(min_value=Fraction(1, 4), max_value=6, max_denominator=max_den))
    bound = p - 1
    lo = Fraction(-8)
    q = draw(st.fractions(min_value=lo, max_value=bound, max_denominator=max_den))
    if p <= 2 and q == bound:
        q -= Fraction(1, 2)
    if q == 0:
        q = Fraction(-1, 3)
    return p, q
