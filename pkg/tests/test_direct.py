import random
from fractions import Fraction

import mpmath
import pytest

from helpers import brute_sum, shifted_tuples
from lucas_dirichlet.characters import (
    AdditiveCharacter,
    AdditiveTuple,
    enumerate_characters,
    parse_character,
    principal_character,
    quadratic_character,
    weight_table,
)
from lucas_dirichlet.direct import (
    direct_additive_L,
    direct_dirichlet_L,
    direct_multiple_zeta,
    direct_shifted_zeta,
    in_domain,
)
from lucas_dirichlet.errors import MixedModuli, OutOfDomain, PartialProductBound
from lucas_dirichlet.lucas import validate_params
from lucas_dirichlet.points import ShiftSpec
from lucas_dirichlet.suites import random_domain_point

TOL = mpmath.mpf("1e-14")


def close(a, b, tol=TOL):
    return abs(mpmath.mpc(a) - mpmath.mpc(b)) <= tol * max(1, abs(b))


def test_domain_membership():
    assert in_domain([2])
    assert in_domain([-0.5, 1])
    assert not in_domain([1, -1])
    assert not in_domain([0j])
    assert not in_domain([1.0], margin=2)


def test_out_of_domain_raises(fib):
    with pytest.raises(OutOfDomain):
        direct_multiple_zeta(fib, [1, -1])


def test_reciprocal_fibonacci_squares(fib):
    res = direct_multiple_zeta(fib, [2])
    expected = brute_sum(fib, [2], shifted_tuples(1, [1], 120))
    assert close(res.value, expected, mpmath.mpf("1e-25"))
    assert res.error_bound <= mpmath.mpf("1e-29")
    assert abs(res.value - mpmath.mpf("2.426320751167241187741569")) < mpmath.mpf("1e-24")


def test_shifted_frozen_values(fib):
    r1 = direct_shifted_zeta(fib, ShiftSpec(2, [1]), [2]).value
    r2 = direct_shifted_zeta(fib, ShiftSpec(2, [2]), [2]).value
    assert abs(r1 - mpmath.mpf("1.2969300248114331530328546")) < mpmath.mpf("1e-24")
    assert abs(r2 - mpmath.mpf("1.1293907263558080347")) < mpmath.mpf("1e-18")
    assert close(r1 + r2, direct_multiple_zeta(fib, [2]).value, mpmath.mpf("1e-28"))


def test_shift_one_is_multiple_zeta(fib):
    s = [mpmath.mpc(1.5, 0.3), mpmath.mpc(2, -1)]
    a = direct_shifted_zeta(fib, ShiftSpec(1, [1, 1]), s).value
    b = direct_multiple_zeta(fib, s).value
    assert close(a, b, mpmath.mpf("1e-28"))


def test_depth_two_against_brute(fib):
    s = [mpmath.mpc(1.2, 0.5), mpmath.mpc(2.5, -0.4)]
    res = direct_shifted_zeta(fib, ShiftSpec(3, [2, 1]), s)
    expected = brute_sum(fib, s, shifted_tuples(3, [2, 1], 140))
    assert close(res.value, expected, mpmath.mpf("1e-20"))


def test_large_real_part_is_first_term():
    params = validate_params(3, 1)
    res = direct_multiple_zeta(params, [200])
    assert close(res.value, 1 + mpmath.mpf(3) ** -200, mpmath.mpf("1e-40"))


def test_dirichlet_examples(fib):
    principal = direct_dirichlet_L(fib, [principal_character(2)], [2]).value
    odd = brute_sum(fib, [2], shifted_tuples(2, [1], 120))
    assert close(principal, odd, mpmath.mpf("1e-25"))
    chi4 = quadratic_character(4)
    l4 = direct_dirichlet_L(fib, [chi4], [3]).value
    assert abs(l4 - mpmath.mpf("0.88256893294773379364")) < mpmath.mpf("1e-19")
    expected = brute_sum(fib, [3], shifted_tuples(1, [1], 100), lambda ms: chi4.integer_value(ms[0]))
    assert close(l4, expected, mpmath.mpf("1e-25"))


def test_dirichlet_depth_two_against_brute(fib):
    chis = [parse_character("5:1"), parse_character("5:2")]
    s = [mpmath.mpc(1.5, 1), mpmath.mpc(1.8, 0)]

    def weight(ms):
        return chis[0].complex_value(ms[0]) * chis[1].complex_value(ms[1])

    res = direct_dirichlet_L(fib, chis, s)
    expected = brute_sum(fib, s, shifted_tuples(1, [1, 1], 110), weight)
    assert close(res.value, expected, mpmath.mpf("1e-18"))


def test_mixed_moduli_rejected(fib):
    with pytest.raises(MixedModuli):
        direct_dirichlet_L(fib, [principal_character(3), principal_character(4)], [2, 2])


def test_additive_examples(fib):
    minus = AdditiveTuple([AdditiveCharacter.rational(-1)])
    res = direct_additive_L(fib, minus, [1]).value
    expected = brute_sum(fib, [1], shifted_tuples(1, [1], 160), lambda ms: (-1) ** ms[0])
    assert close(res, expected, mpmath.mpf("1e-25"))
    assert abs(res - mpmath.mpf("-0.28914464857067158311")) < mpmath.mpf("1e-19")
    ones = AdditiveTuple([AdditiveCharacter.rational(1)] * 2)
    assert close(direct_additive_L(fib, ones, [2, 1.5]).value,
                 direct_multiple_zeta(fib, [2, 1.5]).value, mpmath.mpf("1e-28"))


def test_additive_depth_two_against_brute(fib):
    fs = AdditiveTuple([AdditiveCharacter.rational(2), AdditiveCharacter.rational(Fraction(1, 2))])
    s = [mpmath.mpc(1, 0), mpmath.mpc(2, 0)]
    res = direct_additive_L(fib, fs, s).value
    expected = brute_sum(fib, s, shifted_tuples(1, [1, 1], 120),
                         lambda ms: mpmath.mpf(2) ** ms[0] * mpmath.mpf(2) ** -ms[1])
    assert close(res, expected, mpmath.mpf("1e-20"))
    assert abs(res - mpmath.mpf("0.78325818293026195241")) < mpmath.mpf("1e-19")


def test_partial_product_bound(fib):
    bad = AdditiveTuple([AdditiveCharacter.rational(Fraction(1, 2)), AdditiveCharacter.rational(3)])
    with pytest.raises(PartialProductBound):
        direct_additive_L(fib, bad, [2, 2])


def _tail_is_certified(evaluate):
    loose = evaluate(mpmath.mpf("1e-12"))
    tight = evaluate(mpmath.mpf("1e-30"))
    assert loose.truncation_tail_bound <= mpmath.mpf("1e-12")
    gap = abs(loose.value - tight.value)
    assert gap <= loose.error_bound + tight.error_bound


@pytest.mark.parametrize("pq", [(1, -1), (2, -1), (3, 1), (1, -3)])
def test_tail_bounds_are_certified(pq):
    params = validate_params(*pq)
    rng = random.Random(hash(pq) & 0xFFFF)
    for _ in range(13):
        d = rng.randint(1, 2)
        s = random_domain_point(rng, d, margin=0.25)
        q = rng.randint(1, 4)
        shift = ShiftSpec(q, [rng.randint(1, q) for _ in range(d)])
        _tail_is_certified(lambda eps: direct_shifted_zeta(params, shift, s, eps=eps))
        _tail_is_certified(lambda eps: direct_multiple_zeta(params, s, eps=eps))
        chis = [rng.choice(enumerate_characters(q + 1)) for _ in range(d)]
        _tail_is_certified(lambda eps: direct_dirichlet_L(params, chis, s, eps=eps))
        fs = AdditiveTuple([AdditiveCharacter.rational(Fraction(rng.choice([-1, 1]), rng.randint(1, 2)))
                            for _ in range(d)])
        _tail_is_certified(lambda eps: direct_additive_L(params, fs, s, eps=eps))


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_character_decomposition_of_direct_sums(fib, q):
    s2 = [mpmath.mpc(1.3, 0.4), mpmath.mpc(1.1, -0.2)]
    for chis in ([c] for c in enumerate_characters(q)):
        _check_decomposition(fib, q, chis, s2[1:])
    chars = enumerate_characters(q)
    for chis in ([chars[0], chars[-1]], [chars[-1], chars[-1]]):
        _check_decomposition(fib, q, chis, s2)


def _check_decomposition(params, q, chis, s):
    total = mpmath.mpc(0)
    for residues, w in weight_table(chis):
        if w == 0:
            continue
        total += w.to_mpc() * direct_shifted_zeta(params, ShiftSpec(q, residues), s).value
    assert close(total, direct_dirichlet_L(params, chis, s).value, mpmath.mpf("1e-25"))


def test_monotone_domination(fib):
    rng = random.Random(5)
    for _ in range(10):
        s = random_domain_point(rng, 2, margin=0.3)
        sig = [mpmath.re(z) for z in s.coords]
        bound = direct_multiple_zeta(fib, sig)
        chis = [rng.choice(enumerate_characters(5)) for _ in range(2)]
        val = direct_dirichlet_L(fib, chis, s)
        assert abs(val.value) <= bound.value.real + bound.error_bound + val.error_bound
        fs = AdditiveTuple([AdditiveCharacter.gaussian(0, 1), AdditiveCharacter.rational(-1)])
        add = direct_additive_L(fib, fs, s)
        assert abs(add.value) <= bound.value.real + bound.error_bound + add.error_bound
