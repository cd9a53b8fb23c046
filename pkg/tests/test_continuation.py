import random

import mpmath
import pytest

from lucas_dirichlet.characters import (
    AdditiveCharacter,
    AdditiveTuple,
    enumerate_characters,
    principal_character,
    quadratic_character,
)
from lucas_dirichlet.continuation import (
    DEFAULT_POLICY,
    TruncationPolicy,
    additive_L_cont,
    binom_complex,
    dirichlet_L_cont,
    multiple_zeta_cont,
    shifted_zeta_cont,
)
from lucas_dirichlet.direct import direct_additive_L, direct_dirichlet_L, direct_shifted_zeta
from lucas_dirichlet.errors import AccuracyUnreachable, PartialProductBound, PoleProximity
from lucas_dirichlet.lucas import validate_params
from lucas_dirichlet.points import ShiftSpec
from lucas_dirichlet.suites import random_domain_point


def agree(a, b):
    return abs(a.value - b.value) <= a.error_bound + b.error_bound


def test_binomials():
    assert binom_complex(2, 0) == 1
    assert binom_complex(2, 3) == -4
    assert [binom_complex(-3, k) for k in range(5)] == [1, 3, 3, 1, 0]
    z = mpmath.mpc(0.5, 2)
    assert abs(binom_complex(z, 4) - mpmath.binomial(-z, 4)) < mpmath.mpf("1e-40")


def test_policy_validation():
    with pytest.raises(ValueError):
        TruncationPolicy(eps=0)
    with pytest.raises(ValueError):
        TruncationPolicy(growth=1)
    with pytest.raises(ValueError):
        TruncationPolicy(initial_cutoff=50, max_cutoff=10)
    assert DEFAULT_POLICY.with_eps("1e-30").eps == mpmath.mpf("1e-30")


def test_fibonacci_examples(fib):
    shift = ShiftSpec(2, [1])
    cont = shifted_zeta_cont(fib, shift, [2])
    assert agree(cont, direct_shifted_zeta(fib, shift, [2]))
    assert abs(shifted_zeta_cont(fib, shift, [-1]).value) < mpmath.mpf("1e-25")
    with pytest.raises(PoleProximity):
        shifted_zeta_cont(fib, shift, [0])
    with pytest.raises(PoleProximity):
        shifted_zeta_cont(fib, shift, [mpmath.mpf("1e-9")])


@pytest.mark.parametrize("pq", [(1, -1), (2, -1), (3, 1), (1, -3)])
def test_agrees_with_direct_inside_domain(pq):
    params = validate_params(*pq)
    rng = random.Random(sum(pq) + 17)
    for _ in range(6):
        d = rng.randint(1, 3)
        s = random_domain_point(rng, d)
        q = rng.randint(2, 4)
        shift = ShiftSpec(q, [rng.randint(1, q) for _ in range(d)])
        assert agree(shifted_zeta_cont(params, shift, s), direct_shifted_zeta(params, shift, s))


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_dirichlet_agrees_with_direct(fib, q):
    s = [mpmath.mpc(0.6, 1.1), mpmath.mpc(0.9, -0.4)]
    for chi in enumerate_characters(q):
        assert agree(dirichlet_L_cont(fib, [chi], s[1:]), direct_dirichlet_L(fib, [chi], s[1:]))
    chars = enumerate_characters(q)
    pair = [chars[-1], chars[0]]
    assert agree(dirichlet_L_cont(fib, pair, s), direct_dirichlet_L(fib, pair, s))


def test_additive_agrees_with_direct():
    params = validate_params(2, -1)
    fs = AdditiveTuple([AdditiveCharacter.gaussian(0, 1), AdditiveCharacter.rational(-1)])
    s = [mpmath.mpc(0.3, 0.2), mpmath.mpc(0.8, 1)]
    assert agree(additive_L_cont(params, fs, s), direct_additive_L(params, fs, s))


def test_reductions_outside_domain(fib):
    s = [mpmath.mpc(-0.5, 1.3), mpmath.mpc(-1.2, 0.7)]
    base = multiple_zeta_cont(fib, s)
    ones = AdditiveTuple([AdditiveCharacter.rational(1)] * 2)
    assert agree(additive_L_cont(fib, ones, s), base)
    one_dim = [mpmath.mpc(-2.5, 0.4)]
    parts = [shifted_zeta_cont(fib, ShiftSpec(3, [r]), one_dim) for r in (1, 2, 3)]
    whole = multiple_zeta_cont(fib, one_dim)
    total = sum(p.value for p in parts)
    assert abs(total - whole.value) <= sum(p.error_bound for p in parts) + whole.error_bound
    principal = dirichlet_L_cont(fib, [principal_character(2)], one_dim)
    assert agree(principal, shifted_zeta_cont(fib, ShiftSpec(2, [1]), one_dim))


def test_real_character_is_real_on_real_axis(fib):
    res = dirichlet_L_cont(fib, [quadratic_character(4)], [mpmath.mpf(-0.5)])
    assert abs(res.value.imag) <= res.error_bound
    assert abs(res.value.real) > mpmath.mpf("1e-3")


def test_tighter_eps_uses_more_terms(fib):
    s = [mpmath.mpc(-3.5, 2)]
    shift = ShiftSpec(3, [2])
    prev = None
    for eps in ("1e-10", "1e-20", "1e-30"):
        res = shifted_zeta_cont(fib, shift, s, DEFAULT_POLICY.with_eps(eps))
        assert res.truncation_tail_bound <= mpmath.mpf(eps)
        if prev is not None:
            assert res.terms_used >= prev.terms_used
            assert agree(res, prev)
        prev = res


def test_accuracy_unreachable(fib):
    policy = TruncationPolicy(initial_cutoff=2, max_cutoff=4, eps=mpmath.mpf("1e-40"))
    with pytest.raises(AccuracyUnreachable):
        shifted_zeta_cont(fib, ShiftSpec(2, [1]), [mpmath.mpc(-20.5, 1)], policy)


def test_partial_product_bound(fib):
    fs = AdditiveTuple([AdditiveCharacter.rational(2)])
    with pytest.raises(PartialProductBound):
        additive_L_cont(fib, fs, [-1.5])
