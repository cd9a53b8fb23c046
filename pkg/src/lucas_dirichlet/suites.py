"""Identity suites run by ``verify`` and by the acceptance tests.

Each suite returns a SuiteResult whose checks carry enough detail to see
which input failed and by how much.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from typing import Callable

import mpmath
from mpmath import mp

from .characters import (
    AdditiveCharacter,
    AdditiveTuple,
    can_define_mod,
    enumerate_characters,
    gauss_sum,
    gauss_vanishing_check,
    principal_character,
    weight_table,
)
from .continuation import TruncationPolicy, dirichlet_L_cont, shifted_zeta_cont
from .direct import direct_dirichlet_L, direct_shifted_zeta
from .lucas import validate_params
from .points import MultiComplexPoint, ShiftSpec
from .poles import (
    real_axis_holomorphy_report,
    residue_additive_inner,
    residue_additive_last,
    residue_dirichlet_inner,
    residue_dirichlet_last,
)
from .special import (
    NegIntPoint,
    assert_rational,
    denominators_vanish,
    galois_audit,
    holomorphic_at_neg,
    special_additive,
    special_L_quadratic,
    special_zeta_exact,
    symmetrized_special_zeta,
)


@dataclass
class Check:
    label: str
    ok: bool
    detail: dict = field(default_factory=dict)


@dataclass
class SuiteResult:
    name: str
    description: str
    checks: list[Check] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return bool(self.checks) and all(c.ok for c in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.ok]

    def add(self, label: str, ok: bool, **detail) -> None:
        self.checks.append(Check(label, bool(ok), detail))

    def summary(self) -> str:
        passed = sum(c.ok for c in self.checks)
        return f"{self.name}: {passed}/{len(self.checks)} checks passed ({self.seconds:.1f}s)"


ORACLE_PARAMS = [(1, -1), (2, -1), (3, 1), (1, -3)]
SWEEP_PARAMS = [(1, -1), (2, -1), (3, 1)]


def _fmt(x) -> str:
    return mpmath.nstr(x, 6)


def random_domain_point(rng: random.Random, d: int, margin: float = 0.25) -> MultiComplexPoint:
    """A point whose suffix sums all have real part >= margin."""
    sums = [margin + rng.uniform(0, 2.75) for _ in range(d)]
    coords = []
    for j in range(d):
        nxt = sums[j + 1] if j + 1 < d else 0.0
        re = sums[j] - nxt
        coords.append(mpmath.mpc(round(re, 6), round(rng.uniform(-3, 3), 6)))
    return MultiComplexPoint(coords)


def _timed(fn: Callable[..., SuiteResult]) -> Callable[..., SuiteResult]:
    def wrapper(*args, **kwargs):
        start = time.perf_counter()
        result = fn(*args, **kwargs)
        result.seconds = time.perf_counter() - start
        return result

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


# 1 ------------------------------------------------------------------------


@_timed
def oracle_suite(samples: int = 100, max_depth: int = 3, prec: int = 128, seed: int = 20240,
                 eps=mpmath.mpf("1e-20")) -> SuiteResult:
    """Continued shifted zeta against the direct oracle inside the domain."""
    res = SuiteResult("oracle", "continuation equals direct summation within combined bounds")
    rng = random.Random(seed)
    policy = TruncationPolicy(eps=eps)
    for i in range(samples):
        pq = rng.choice(ORACLE_PARAMS)
        params = validate_params(*pq)
        d = rng.randint(1, max_depth)
        q = rng.choice([2, 3, 4])
        shift = ShiftSpec(q, [rng.randint(1, q) for _ in range(d)])
        s = random_domain_point(rng, d)
        with mp.workprec(prec):
            cont = shifted_zeta_cont(params, shift, s, policy, prec)
            direct = direct_shifted_zeta(params, shift, s, eps, prec)
            diff = abs(cont.value - direct.value)
            bound = cont.error_bound + direct.error_bound
        res.add(
            f"#{i} P,Q={pq} q={q} r={shift.residues} s={[_fmt(z) for z in s.coords]}",
            diff <= bound,
            difference=diff,
            bound=bound,
        )
    return res


# 2 ------------------------------------------------------------------------


@_timed
def character_suite(moduli=(2, 3, 4, 5), max_depth: int = 2, prec: int = 128, seed: int = 7,
                    tol=mpmath.mpf("1e-15")) -> SuiteResult:
    """Character chain = explicit r-sum of shifted continuations = direct oracle."""
    res = SuiteResult("characters", "Dirichlet L as a character-weighted sum of shifted zetas")
    rng = random.Random(seed)
    policy = TruncationPolicy(eps=mpmath.mpf("1e-18"))
    for q in moduli:
        chars = enumerate_characters(q)
        for d in range(1, max_depth + 1):
            for chis in itertools.product(chars, repeat=d):
                pq = rng.choice(ORACLE_PARAMS)
                params = validate_params(*pq)
                s = random_domain_point(rng, d)
                with mp.workprec(prec):
                    chain = dirichlet_L_cont(params, chis, s, policy, prec).value
                    explicit = mpmath.mpc(0)
                    for rs, w in weight_table(chis):
                        explicit += w.to_mpc(prec) * shifted_zeta_cont(
                            params, ShiftSpec(q, rs), s, policy, prec).value
                    direct = direct_dirichlet_L(params, chis, s, mpmath.mpf("1e-18"), prec).value
                    e1 = abs(chain - explicit)
                    e2 = abs(chain - direct)
                res.add(
                    f"P,Q={pq} chi={[c.label() for c in chis]} s={[_fmt(z) for z in s.coords]}",
                    e1 <= tol and e2 <= tol,
                    chain_vs_rsum=e1,
                    chain_vs_direct=e2,
                )
    return res


# 3 ------------------------------------------------------------------------


def _residue_check(res: SuiteResult, label: str, fn, tol) -> None:
    value = fn()
    res.add(label, value.rel_error < tol, closed_form=value.closed_form,
            numeric=value.numeric_check, rel_error=value.rel_error)


@_timed
def residue_suite(prec: int = 128, tol=mpmath.mpf("1e-8"), max_depth: int = 2,
                  k_sums=(0, 1, 2), ns=(-1, 0, 1)) -> SuiteResult:
    """Closed-form residues against trapezoid contour integrals on slices."""
    res = SuiteResult("residues", "closed-form residues versus numeric contour limits")
    fib = validate_params(1, -1)
    p31 = validate_params(3, 1)
    p2m1 = validate_params(2, -1)
    ch3 = enumerate_characters(3)
    ch4 = enumerate_characters(4)
    ch5 = enumerate_characters(5)
    generic = [mpmath.mpc("2.3", "0.7")]

    last_d1 = [(fib, [principal_character(2)]), (p31, [ch3[1]]), (p2m1, [ch4[1]]), (p31, [ch5[1]])]
    last_d2 = [(p31, [ch3[1], ch3[0]]), (fib, [principal_character(2)] * 2), (p2m1, [ch4[1], ch4[1]])]
    f = AdditiveCharacter.rational
    add_d1 = [(fib, AdditiveTuple([f(-1)])), (p31, AdditiveTuple([f("1/2")])),
              (p2m1, AdditiveTuple([AdditiveCharacter.gaussian(0, 1)]))]
    add_d2 = [(fib, AdditiveTuple([f(1), f(-1)])), (p31, AdditiveTuple([f(2), f("1/2")])),
              (p2m1, AdditiveTuple([f(-1), f("1/2")]))]
    k_multis = {0: (0, 0), 1: (1, 0), 2: (1, 1)}

    for k, n in itertools.product(k_sums, ns):
        for params, chis in last_d1:
            _residue_check(res, f"dirichlet-last d=1 {params} chi={chis[0].label()} k={k} n={n}",
                           lambda: residue_dirichlet_last(params, chis, [], k, n, prec), tol)
        for params, fs in add_d1:
            _residue_check(res, f"additive-last d=1 {params} f={fs} k={k} n={n}",
                           lambda: residue_additive_last(params, fs, [], k, n, prec), tol)
        if max_depth < 2:
            continue
        for params, chis in last_d2:
            labels = [c.label() for c in chis]
            _residue_check(res, f"dirichlet-last d=2 {params} chi={labels} k={k} n={n}",
                           lambda: residue_dirichlet_last(params, chis, generic, k, n, prec), tol)
            _residue_check(
                res, f"dirichlet-inner d=2 j=1 {params} chi={labels} k={k_multis[k]} n={n}",
                lambda: residue_dirichlet_inner(params, chis, 1, k_multis[k], n, generic, prec), tol)
        for params, fs in add_d2:
            _residue_check(res, f"additive-last d=2 {params} f={fs} k={k} n={n}",
                           lambda: residue_additive_last(params, fs, generic, k, n, prec), tol)
            _residue_check(
                res, f"additive-inner d=2 j=1 {params} f={fs} k={k_multis[k]} n={n}",
                lambda: residue_additive_inner(params, fs, 1, k_multis[k], n, generic, prec), tol)
    return res


# 4 ------------------------------------------------------------------------


@_timed
def holomorphy_suite(moduli=(3, 4, 5, 8), re_bounds=(-6, 1), gauss_limit: int = 24) -> SuiteResult:
    """Real-axis candidates certified by exact Gauss-sum vanishing; predicted vanishing implies vanishing."""
    res = SuiteResult("holomorphy", "real-axis holomorphy via exact Gauss sums")
    for q in moduli:
        for chi in enumerate_characters(q)[1:]:
            for pq in ORACLE_PARAMS:
                report = real_axis_holomorphy_report(chi, validate_params(*pq), q, re_bounds)
                res.add(f"real axis chi={chi.label()} P,Q={pq}", report["certified"],
                        candidates=len(report["candidates"]))
    for q in range(2, gauss_limit + 1):
        bad = []
        count = 0
        for chi in enumerate_characters(q):
            # tau(chi, a) depends on a mod q only
            for a in range(q):
                predicted, actual = gauss_vanishing_check(chi, a)
                count += 1
                if predicted and not actual:
                    bad.append((chi.label(), a))
        res.add(f"gauss vanishing q={q}", not bad, pairs=count, violations=bad)
    return res


# 5-7 ----------------------------------------------------------------------


def sweep_points(max_depth: int = 3, max_m: int = 3, moduli=(2, 3)):
    """(params tuple, q, residues, m) over the exact sweep."""
    for pq in SWEEP_PARAMS:
        for q in moduli:
            for d in range(1, max_depth + 1):
                for m in itertools.product(range(1, max_m + 1), repeat=d):
                    for rs in itertools.product(range(1, q + 1), repeat=d):
                        yield pq, q, rs, m


def _real_characters(q: int):
    return [c for c in enumerate_characters(q) if c.is_real]


@_timed
def rationality_suite(max_depth: int = 3, max_m: int = 3, moduli=(2, 3)) -> SuiteResult:
    """Exact special values have zero sqrt(D) part wherever they are holomorphic."""
    res = SuiteResult("rationality", "special values at negative integers are rational")
    shifted = holo = 0
    bad = []
    for pq, q, rs, m in sweep_points(max_depth, max_m, moduli):
        params = validate_params(*pq)
        shifted += 1
        if not holomorphic_at_neg(params, q, m):
            continue
        holo += 1
        value = special_zeta_exact(params, ShiftSpec(q, rs), NegIntPoint(m))
        if value.singular or not value.is_rational:
            bad.append((pq, q, rs, m))
    res.add("shifted zeta", not bad, points=shifted, holomorphic=holo, failures=bad[:20])

    bad = []
    count = 0
    for pq in SWEEP_PARAMS:
        params = validate_params(*pq)
        for q in moduli:
            for d in range(1, max_depth + 1):
                for chis in itertools.product(_real_characters(q), repeat=d):
                    for m in itertools.product(range(1, max_m + 1), repeat=d):
                        if not holomorphic_at_neg(params, q, m):
                            continue
                        count += 1
                        try:
                            special_L_quadratic(params, chis, m)
                        except Exception as exc:  # noqa: BLE001 - recorded as a failure
                            bad.append((pq, [c.label() for c in chis], m, type(exc).__name__))
    res.add("quadratic and principal characters", not bad, points=count, failures=bad[:20])

    bad = []
    count = singular = 0
    values = [AdditiveCharacter.rational(v) for v in (1, -1, "1/2")]
    for pq in SWEEP_PARAMS:
        params = validate_params(*pq)
        for d in range(1, max_depth + 1):
            for fs in itertools.product(values, repeat=d):
                tup = AdditiveTuple(fs)
                for m in itertools.product(range(1, max_m + 1), repeat=d):
                    count += 1
                    try:
                        special_additive(params, tup, m)
                    except Exception as exc:  # noqa: BLE001
                        if type(exc).__name__ == "SingularPoint":
                            singular += 1
                        else:
                            bad.append((pq, str(tup), m, type(exc).__name__))
    res.add("additive characters", not bad, points=count, singular=singular, failures=bad[:20])
    return res


@_timed
def symmetrization_suite(max_depth: int = 3, max_m: int = 3, moduli=(2, 3)) -> SuiteResult:
    """Barring average equals the finite sum; every sigma pairs with its Galois conjugate."""
    res = SuiteResult("symmetrization", "symmetrized sum and Galois pairing")
    count = 0
    sym_bad = []
    gal_bad = []
    for pq, q, rs, m in sweep_points(max_depth, max_m, moduli):
        params = validate_params(*pq)
        if not holomorphic_at_neg(params, q, m):
            continue
        count += 1
        shift = ShiftSpec(q, rs)
        point = NegIntPoint(m)
        direct = special_zeta_exact(params, shift, point)
        sym, terms = symmetrized_special_zeta(params, shift, point)
        if sym.value != direct.value:
            sym_bad.append((pq, q, rs, m))
        if not galois_audit(terms, point):
            gal_bad.append((pq, q, rs, m))
    res.add("symmetrized total equals finite sum", not sym_bad, points=count, failures=sym_bad[:20])
    res.add("galois pairing of sigma terms", not gal_bad, points=count, failures=gal_bad[:20])
    return res


@_timed
def predicate_suite(max_depth: int = 3, max_m: int = 3, moduli=(2, 3)) -> SuiteResult:
    """Parity predicate against the exact denominator scan."""
    res = SuiteResult("predicate", "holomorphy predicate agrees with the exact scan")
    seen = set()
    disagreements = []
    for pq, q, _rs, m in sweep_points(max_depth, max_m, moduli):
        if (pq, q, m) in seen:
            continue
        seen.add((pq, q, m))
        params = validate_params(*pq)
        if holomorphic_at_neg(params, q, m) == denominators_vanish(params, q, m):
            disagreements.append((pq, q, m))
    res.add("predicate versus scan", not disagreements, points=len(seen),
            disagreements=disagreements)
    return res


# 8 ------------------------------------------------------------------------


def is_primitive(chi) -> bool:
    q = chi.modulus
    return not any(can_define_mod(chi, d) for d in range(1, q) if q % d == 0)


@_timed
def classical_suite(prec: int = 128) -> SuiteResult:
    res = SuiteResult("classical", "classical spot checks")
    for q in (3, 4, 5, 7, 8):
        for chi in enumerate_characters(q):
            if not is_primitive(chi):
                continue
            tau = gauss_sum(chi, 1)
            norm = tau * tau.conjugate()
            res.add(f"|tau({chi.label()}, 1)|^2 = {q}", norm == q, norm=str(norm.as_rational()))
    fib = validate_params(1, -1)
    value = special_zeta_exact(fib, ShiftSpec(2, [1]), NegIntPoint([1]))
    res.add("Fibonacci shifted zeta at -1 (q=2, r=1) is 0", value.value == 0 and
            assert_rational(value) == 0, value=str(value.value))
    with mp.workprec(prec):
        r = residue_dirichlet_last(fib, [principal_character(2)], [], 0, 0, prec)
        expected = 1 / (2 * fib.log_alpha(prec))
        err_closed = abs(r.closed_form - expected)
        err_numeric = abs(r.numeric_check - expected)
    res.add("residue at s=0, principal chi mod 2, equals 1/(2 log alpha)",
            err_closed < 1e-10 and err_numeric < 1e-10,
            expected=expected, closed_error=err_closed, numeric_error=err_numeric)
    return res


SUITES: dict[str, Callable[..., SuiteResult]] = {
    "oracle": oracle_suite,
    "characters": character_suite,
    "residues": residue_suite,
    "holomorphy": holomorphy_suite,
    "rationality": rationality_suite,
    "symmetrization": symmetrization_suite,
    "predicate": predicate_suite,
    "classical": classical_suite,
}
