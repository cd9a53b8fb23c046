from fractions import Fraction

import mpmath
import pytest

from lucas_dirichlet.characters import (
    AdditiveCharacter,
    AdditiveTuple,
    char_value,
    enumerate_characters,
    principal_character,
    quadratic_character,
)
from lucas_dirichlet.continuation import dirichlet_L_cont
from lucas_dirichlet.errors import InnerPole, NonIsolatedPole, PrincipalCharacter
from lucas_dirichlet.lucas import validate_params
from lucas_dirichlet.points import ShiftSpec
from lucas_dirichlet.poles import (
    RESIDUE_POLICY,
    enumerate_poles_additive,
    enumerate_poles_zeta,
    numeric_residue,
    real_axis_candidates,
    real_axis_holomorphy_report,
    residue_additive_inner,
    residue_additive_last,
    residue_dirichlet_inner,
    residue_dirichlet_last,
    shifted_residue_closed,
)

GENERIC = mpmath.mpc(2.3, 0.7)


@pytest.mark.parametrize("pq, q", [((1, -1), 2), ((2, -1), 3), ((3, 1), 4), ((1, -3), 5)])
def test_locations_match_formula(pq, q):
    params = validate_params(*pq)
    log_a = params.log_alpha()
    c = mpmath.log(abs(mpmath.mpf(params.q_param.numerator) / params.q_param.denominator)) / log_a
    for h in enumerate_poles_zeta(params, q, 1, 3, 2):
        ell = h.k_sum if params.q_param < 0 else 0
        expected = (c - 2) * h.k_sum + 1j * (ell + mpmath.mpf(2 * h.n) / q) * mpmath.pi / log_a
        assert abs(h.location - expected) < mpmath.mpf("1e-30")
        assert h.ell == ell


def test_fibonacci_real_poles(fib):
    found = enumerate_poles_zeta(fib, 2, 1, 4, 4, window=(-5, 1, -0.1, 0.1))
    assert sorted(round(float(h.location.real)) for h in found) == [-4, -2, 0]
    assert all(abs(h.location.imag) < 1e-30 for h in found)
    locations = [h.location for h in enumerate_poles_zeta(fib, 3, 1, 3, 3)]
    assert all(abs(a - b) > 1e-20 for i, a in enumerate(locations) for b in locations[:i])


def test_additive_pole_shift():
    params = validate_params(3, 1)
    fs = AdditiveTuple([AdditiveCharacter.rational(Fraction(1, 2))])
    (h,) = enumerate_poles_additive(params, fs, 1, 0, 0)
    assert abs(h.location - (-mpmath.log(2) / params.log_alpha())) < mpmath.mpf("1e-30")


def test_numeric_residue_of_simple_functions():
    value, nodes = numeric_residue(lambda s: 1 / s, 0, mpmath.mpf("0.05"))
    assert abs(value - 1) < mpmath.mpf("1e-25") and nodes >= 32
    value, _ = numeric_residue(lambda s: mpmath.exp(s) / (s - 1) ** 2, 1, mpmath.mpf("0.5"), tol=1e-30)
    assert abs(value - mpmath.e) < mpmath.mpf("1e-25")
    value, _ = numeric_residue(lambda s: 3 / (s - 2) + 1 / (s - 3), 2, 0.4)
    assert abs(value - 3) < mpmath.mpf("1e-25")
    with pytest.raises(NonIsolatedPole):
        numeric_residue(lambda s: 1 / s, 0, 1, other_poles=[0.5])


def test_principal_mod_two_at_zero(fib):
    res = residue_dirichlet_last(fib, [principal_character(2)], [], 0, 0)
    expected = 1 / (2 * fib.log_alpha())
    assert abs(res.closed_form - expected) < mpmath.mpf("1e-30")
    assert res.rel_error < mpmath.mpf("1e-20")


def test_gauss_vanishing_residue(fib):
    res = residue_dirichlet_last(fib, [quadratic_character(4)], [], 1, -2)
    assert abs(res.closed_form) < mpmath.mpf("1e-30")
    assert abs(res.numeric_check) < mpmath.mpf("1e-20")


def test_residue_is_the_limit_of_s_minus_a_times_f(fib):
    chi = enumerate_characters(5)[1]
    res = residue_dirichlet_last(fib, [chi], [], 1, 1, numeric=False)
    a = res.location
    for h in (mpmath.mpf("1e-8"), mpmath.mpf("1e-12")):
        near = h * dirichlet_L_cont(fib, [chi], [a + h], RESIDUE_POLICY, guard=False).value
        assert abs(near - res.closed_form) < 100 * h * max(1, abs(res.closed_form))


@pytest.mark.parametrize("q, r, k, n", [(3, 1, 0, 1), (4, 3, 1, -1), (5, 2, 2, 0)])
def test_character_sum_of_residues_is_shifted_residue(fib, q, r, k, n):
    chars = enumerate_characters(q)
    total = 0
    for chi in chars:
        res = residue_dirichlet_last(fib, [chi], [], k, n, numeric=False)
        total += char_value(chi, r).conjugate().to_mpc() * res.closed_form
    shifted, _ = shifted_residue_closed(fib, ShiftSpec(q, [r]), 1, k, n, [], 128, 1, RESIDUE_POLICY)
    assert abs(total - len(chars) * shifted) < mpmath.mpf("1e-25")


def test_depth_two_residues(fib):
    chis = [enumerate_characters(3)[1], principal_character(3)]
    last = residue_dirichlet_last(fib, chis, [GENERIC], 1, 0)
    assert last.rel_error < 1e-8
    inner = residue_dirichlet_inner(fib, chis, 1, (1, 0), -1, [GENERIC])
    assert inner.rel_error < 1e-8


def test_additive_residues(fib):
    ones = AdditiveTuple([AdditiveCharacter.rational(1)])
    res = residue_additive_last(fib, ones, [], 0, 0)
    assert abs(res.closed_form - 1 / fib.log_alpha()) < mpmath.mpf("1e-30")
    assert res.rel_error < 1e-8
    minus = AdditiveTuple([AdditiveCharacter.rational(-1)])
    res = residue_additive_last(fib, minus, [], 1, 0)
    assert abs(res.location - mpmath.mpc(-2, 2 * mpmath.pi / fib.log_alpha())) < mpmath.mpf("1e-30")
    assert res.rel_error < 1e-8
    fs2 = AdditiveTuple([AdditiveCharacter.rational(2), AdditiveCharacter.rational(Fraction(1, 2))])
    inner = residue_additive_inner(fib, fs2, 1, (1, 1), 1, [GENERIC])
    assert inner.rel_error < 1e-8


def test_inner_pole_is_reported(fib):
    chis = [principal_character(2), principal_character(2)]
    with pytest.raises(InnerPole):
        residue_dirichlet_last(fib, chis, [mpmath.mpc(-2, 0)], 2, 0, numeric=False)


def test_real_axis_candidates(fib):
    assert real_axis_candidates(fib, 4, (-6, 1)) == [(0, 0), (1, -2), (2, -4), (3, -6)]
    assert real_axis_candidates(fib, 3, (-6, 1)) == [(0, 0), (2, -3)]
    assert real_axis_candidates(validate_params(3, 1), 3, (-6, 1)) == [(0, 0), (1, 0), (2, 0), (3, 0)]


@pytest.mark.parametrize("q", [3, 4, 5, 8])
def test_real_axis_holomorphy(fib, q):
    for chi in enumerate_characters(q)[1:]:
        report = real_axis_holomorphy_report(chi, fib)
        assert report["certified"]
    with pytest.raises(PrincipalCharacter):
        real_axis_holomorphy_report(principal_character(q), fib)
