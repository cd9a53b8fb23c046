import threading
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given

from helpers import admissible_pq
from lucas_dirichlet.errors import ConstraintViolated, NonPositiveP, QZero
from lucas_dirichlet.lucas import (
    LucasSequenceCache,
    alpha_power,
    lucas_closed_form,
    lucas_u,
    sequence_for,
    validate_params,
)
from lucas_dirichlet.quadfield import QuadExtNumber


def test_fibonacci_parameters(fib):
    assert fib.d == 5
    assert fib.alpha == QuadExtNumber(Fraction(1, 2), Fraction(1, 2), 5)
    assert fib.beta == QuadExtNumber(Fraction(1, 2), Fraction(-1, 2), 5)
    assert not fib.d_is_square


@pytest.mark.parametrize(
    "p, q, err",
    [(1, 0, QZero), (0, -1, NonPositiveP), (-1, -1, NonPositiveP), (2, 1, ConstraintViolated),
     (1, 0.5, ConstraintViolated), (4, 4, ConstraintViolated)],
)
def test_invalid_parameters(p, q, err):
    with pytest.raises(err):
        validate_params(Fraction(p), Fraction(q))


def test_boundary_for_large_p():
    params = validate_params(3, 2)
    assert params.d == 1 and params.d_is_square
    assert [lucas_u(sequence_for(params), n) for n in range(5)] == [0, 1, 3, 7, 15]


def test_known_values(fib):
    cache = sequence_for(fib)
    assert lucas_u(cache, 0) == 0
    assert lucas_u(cache, 10) == 55
    pell = sequence_for(validate_params(2, -1))
    assert [lucas_u(pell, n) for n in range(7)] == [0, 1, 2, 5, 12, 29, 70]
    mersenne = sequence_for(validate_params(3, 2))
    assert lucas_u(mersenne, 5) == 31


def test_alpha_powers(fib):
    assert alpha_power(fib, 0) == 1
    assert alpha_power(fib, 2) == fib.alpha + 1
    assert alpha_power(fib, -3) * alpha_power(fib, 3) == 1


@pytest.mark.parametrize("p, q", [(1, -1), (2, -1), (3, 1), (1, -3), (Fraction(5, 2), Fraction(-1, 3))])
def test_recurrence_matches_closed_form_to_500(p, q):
    params = validate_params(p, q)
    cache = LucasSequenceCache(params)
    for n in range(501):
        assert lucas_closed_form(params, n) == cache[n]


@given(admissible_pq())
def test_recurrence_matches_closed_form(pq):
    params = validate_params(*pq)
    cache = LucasSequenceCache(params, certify=60)
    for n in range(61):
        assert lucas_closed_form(params, n) == cache[n]


@given(admissible_pq())
def test_positive_and_dominated(pq):
    params = validate_params(*pq)
    cache = LucasSequenceCache(params, certify=200)
    assert all(cache[n] > 0 for n in range(1, 201))
    with mpmath.workprec(128):
        a = params.alpha.to_mpf(128)
        assert abs(mpmath.mpf(params.q_param.numerator) / params.q_param.denominator) < a * a


@given(admissible_pq())
def test_monotone_when_p_at_least_one(pq):
    params = validate_params(*pq)
    cache = LucasSequenceCache(params, certify=200)
    if params.p >= 1:
        assert cache.monotone_from == 1
        assert all(cache[n + 1] >= cache[n] for n in range(1, 200))
    else:
        assert all(cache[n + 1] >= cache[n] for n in range(cache.monotone_from, 200))


def test_small_p_is_eventually_monotone():
    cache = LucasSequenceCache(validate_params(Fraction(1, 2), -1))
    assert cache[2] < cache[1] and cache[4] < cache[3]
    assert cache.monotone_from == 4


def test_concurrent_readers_agree(fib):
    cache = LucasSequenceCache(fib, certify=0)
    results = []

    def read():
        results.append([cache[n] for n in range(0, 400, 7)])

    threads = [threading.Thread(target=read) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert all(r == results[0] for r in results)
    assert all(cache[n] == cache[n - 1] + cache[n - 2] for n in range(2, 400))
