import itertools
import warnings
from fractions import Fraction

import mpmath
import pytest

from lucas_dirichlet.characters import (
    AdditiveCharacter,
    AdditiveTuple,
    enumerate_characters,
    principal_character,
    quadratic_character,
)
from lucas_dirichlet.continuation import DEFAULT_POLICY, additive_L_cont, dirichlet_L_cont, shifted_zeta_cont
from lucas_dirichlet.errors import (
    NonQuadraticCharacter,
    NonRationalCharacter,
    NotRational,
    RequiresValidation,
    SingularPoint,
    SquareDiscriminant,
)
from lucas_dirichlet.lucas import validate_params
from lucas_dirichlet.points import ShiftSpec
from lucas_dirichlet.quadfield import QuadExtNumber
from lucas_dirichlet.special import (
    SpecialValueResult,
    assert_rational,
    denominators_vanish,
    galois_audit,
    holomorphic_at_neg,
    special_additive,
    special_additive_exact,
    special_L_quadratic,
    special_zeta_exact,
    symmetrized_special_zeta,
)

POLICY = DEFAULT_POLICY.with_eps("1e-40")
TOL = mpmath.mpf("1e-25")


def test_fibonacci_odd_index_value_vanishes(fib):
    # alpha/(1 - alpha^2) = -1 and likewise for beta, so the two halves cancel
    result = special_zeta_exact(fib, ShiftSpec(2, [1]), [1])
    assert result.value == 0 and assert_rational(result) == 0
    sym, terms = symmetrized_special_zeta(fib, ShiftSpec(2, [1]), [1])
    assert sym.value == 0
    assert [t.sigma for t in terms if not t.barring] == [-1, 1]
    assert galois_audit(terms, [1])


def test_singular_point(fib):
    result = special_zeta_exact(fib, ShiftSpec(2, [1]), [2])
    assert result.singular and result.value is None
    with pytest.raises(SingularPoint):
        special_zeta_exact(fib, ShiftSpec(2, [1]), [2], strict=True)
    with pytest.raises(SingularPoint):
        assert_rational(result)


def test_additive_examples(fib):
    assert special_additive(fib, AdditiveTuple([AdditiveCharacter.rational(-1)]), 1) == -1
    p3 = validate_params(3, 1)
    half = AdditiveTuple([AdditiveCharacter.rational(Fraction(1, 2))])
    assert [special_additive(p3, half, m) for m in (1, 2, 3)] == [-2, Fraction(-2, 3), Fraction(34, 31)]


def test_quadratic_examples(fib):
    chi5 = quadratic_character(5)
    assert [special_L_quadratic(fib, [chi5], m) for m in (1, 2, 3)] == [Fraction(2, 11), 0, Fraction(-34, 341)]


@pytest.mark.parametrize(
    "pq, q, rs, ms",
    [((2, -1), 3, [1, 2], [1, 2]), ((2, -1), 2, [2], [3]), ((3, 1), 3, [3, 1], [2, 1]),
     ((1, -3), 2, [1, 2, 1], [1, 1, 1]), ((1, -1), 3, [2, 3], [2, 3])],
)
def test_exact_matches_continuation(pq, q, rs, ms):
    params = validate_params(*pq)
    shift = ShiftSpec(q, rs)
    if not holomorphic_at_neg(params, q, ms):
        pytest.skip("singular point")
    exact = special_zeta_exact(params, shift, ms)
    cont = shifted_zeta_cont(params, shift, [-m for m in ms], POLICY, prec=192)
    assert abs(cont.value - exact.value.to_mpf(192)) < TOL


def test_character_values_match_continuation():
    pell = validate_params(2, -1)
    for chis, ms in (([quadratic_character(3)], [1]), ([quadratic_character(4), principal_character(4)], [1, 1])):
        if not holomorphic_at_neg(pell, chis[0].modulus, ms):
            continue
        try:
            exact = special_L_quadratic(pell, chis, ms)
        except SingularPoint:
            continue
        cont = dirichlet_L_cont(pell, chis, [-m for m in ms], POLICY, prec=192)
        assert abs(cont.value - mpmath.mpf(exact.numerator) / exact.denominator) < TOL
    fs = AdditiveTuple([AdditiveCharacter.rational(-1), AdditiveCharacter.rational(Fraction(1, 2))])
    exact = special_additive(pell, fs, [2, 1])
    cont = additive_L_cont(pell, fs, [-2, -1], POLICY, prec=192)
    assert abs(cont.value - mpmath.mpf(exact.numerator) / exact.denominator) < TOL


def test_predicate_agrees_with_scan_on_sweep():
    for pq in ((1, -1), (2, -1), (3, 1)):
        params = validate_params(*pq)
        for q in (2, 3):
            for d in (1, 2, 3):
                for ms in itertools.product(range(1, 4), repeat=d):
                    assert holomorphic_at_neg(params, q, ms) == (not denominators_vanish(params, q, ms))


def test_predicate_is_conservative_for_q_divisible_by_four(fib):
    # q m = 0 mod 4 always, yet |Y| = alpha^{m - 2K} != 1 for odd m
    assert not holomorphic_at_neg(fib, 4, [1])
    assert not denominators_vanish(fib, 4, [1])
    assert denominators_vanish(fib, 4, [2])


def test_symmetrization_matches_direct_sum():
    params = validate_params(2, -1)
    for rs, ms in (([1, 2], [1, 2]), ([3, 3], [2, 1]), ([1], [3])):
        shift = ShiftSpec(3, rs)
        exact = special_zeta_exact(params, shift, ms)
        sym, terms = symmetrized_special_zeta(params, shift, ms)
        assert sym.value == exact.value
        assert galois_audit(terms, ms)
        assert len(terms) == 2 ** len(ms) * len(list(itertools.product(*(range(m + 1) for m in ms))))


def test_galois_audit_detects_tampering(fib):
    sym, terms = symmetrized_special_zeta(fib, ShiftSpec(3, [1, 2]), [1, 2])
    assert galois_audit(terms, [1, 2])
    bad = list(terms)
    t = bad[0]
    bad[0] = t.__class__(t.k, t.barring, t.weight, t.gammas, t.sigma + 1)
    assert not galois_audit(bad, [1, 2])


def test_square_discriminant_handling():
    params = validate_params(5, -6)
    assert params.d_is_square
    with pytest.warns(RequiresValidation):
        result = special_zeta_exact(params, ShiftSpec(3, [1]), [1])
    assert result.square_discriminant and result.value.is_rational()
    with pytest.raises(SquareDiscriminant):
        special_additive(params, AdditiveTuple([AdditiveCharacter.rational(-1)]), 1)
    with pytest.raises(SquareDiscriminant):
        assert_rational(result)


def test_rejections(fib):
    with pytest.raises(NonQuadraticCharacter):
        special_L_quadratic(fib, [enumerate_characters(5)[1]], [1])
    with pytest.raises(NonRationalCharacter):
        special_additive(fib, AdditiveTuple([AdditiveCharacter.gaussian(0, 1)]), 1)
    with pytest.raises(NotRational):
        assert_rational(SpecialValueResult(QuadExtNumber(1, 1, 5), False, False))
    with pytest.raises(ValueError):
        special_zeta_exact(fib, ShiftSpec(2, [1, 1]), [1])
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        special_zeta_exact(fib, ShiftSpec(2, [1]), [1])


def test_additive_exact_is_rational_on_sweep():
    for pq in ((1, -1), (2, -1), (3, 1)):
        params = validate_params(*pq)
        for fvals in itertools.product([1, -1, Fraction(1, 2)], repeat=2):
            fs = AdditiveTuple([AdditiveCharacter.rational(f) for f in fvals])
            if any(abs(fs.partial_product_exact(j)[0]) > 1 for j in (1, 2)):
                continue
            for ms in itertools.product(range(1, 3), repeat=2):
                result = special_additive_exact(params, fs, ms)
                if not result.singular:
                    assert result.value.is_rational()


def test_mod_four_quadratic_at_odd_m(fib):
    chi4 = quadratic_character(4)
    assert special_L_quadratic(fib, [chi4], [1]) == Fraction(2, 5)
    assert special_L_quadratic(fib, [chi4], [3]) == Fraction(7, 25)
    cont = dirichlet_L_cont(fib, [chi4], [-1], POLICY, prec=192)
    assert abs(cont.value - mpmath.mpf(2) / 5) < TOL
    with pytest.raises(SingularPoint):
        special_L_quadratic(fib, [chi4], [2])
