"""Direct truncated summation inside the convergence domain, with certified tails.

All four series share one shape.  With M_0 = 0 < M_1 < ... < M_d the index
of the j-th factor, the partial sums over tuples ending at M_j = m obey

    a_j(m) = w_j(m) * U_m^{-s_j} * g_j^{r_j} * C_{j-1}(m - r_j)
    C_j(x) = g_{j+1}^q * C_j(x - q) + a_j(x)

where the gap from M_{j-1} to M_j is q*n + r_j (n >= 0), w_j is a bounded
positional weight (Dirichlet characters) and g_j a bounded gap multiplier
(additive characters, written through their partial products so every
intermediate stays O(1)).

The tail over M_d > N is bounded by the unweighted series over all strictly
increasing tuples, whose growth past N is enveloped by sums of geometric
sequences using  U_N a^x <= U_{N+x} <= U_N A^x.
"""

from __future__ import annotations

from typing import Callable, Sequence

import mpmath
from mpmath import mp

from .characters import AdditiveTuple, DirichletCharacter, check_common_modulus
from .errors import AccuracyUnreachable, OutOfDomain
from .lucas import LucasParams, sequence_for
from .points import EvalResult, MultiComplexPoint, ShiftSpec, as_point

GUARD_BITS = 24
MAX_TERMS = 20000


def in_domain(s, margin=0) -> bool:
    """Every suffix sum of real parts is at least ``margin``."""
    s = as_point(s)
    return all(mpmath.re(z) >= margin for z in s.suffix_sums()) and (
        margin > 0 or all(mpmath.re(z) > 0 for z in s.suffix_sums())
    )


def domain_margin(s: MultiComplexPoint) -> mpmath.mpf:
    return min(mpmath.re(z) for z in s.suffix_sums())


def _growth_bounds(params: LucasParams, n: int):
    """(a, A) with a <= U_{k+1}/U_k <= A for every k >= n."""
    alpha = params.alpha.to_mpf()
    x = abs(params.beta.to_mpf()) / alpha
    xn = x ** n
    a = alpha * (1 - xn * x) / (1 + xn)
    big_a = alpha * (1 + xn * x) / (1 - xn)
    slack = mpmath.ldexp(1, -mp.prec + 8)
    return a * (1 - slack), big_a * (1 + slack)


def _tail_bound(b_prev: Sequence, u_n, sigmas: Sequence, a, big_a, eta) -> mpmath.mpf:
    """Bound sum over M_d > N of prod U_{M_i}^{-sigma_i} over increasing tuples.

    ``b_prev[j]`` is the unweighted absolute partial sum B_j(N), j = 0..d-1.
    """
    d = len(sigmas)

    def lam(sig):
        return a ** (-sig) if sig >= 0 else big_a ** (-sig)

    envelope = [(mpmath.mpf(1), mpmath.mpf(1))]  # (base, coeff): B_0 == 1
    for j in range(1, d):
        sig = sigmas[j - 1]
        lj = lam(sig)
        scale = u_n ** (-sig)
        const = b_prev[j]
        nxt = []
        for mu, c in envelope:
            base = mu * lj
            if base <= 1 - eta:
                const += c * scale * lj / (1 - base)
            elif base < 1 + eta:
                nxt.append((1 + eta, c * scale * lj / eta))
            else:
                nxt.append((base, c * scale * lj / (base - 1)))
        envelope = [(mpmath.mpf(1), const)] + nxt
    ld = lam(sigmas[-1])
    scale = u_n ** (-sigmas[-1])
    total = mpmath.mpf(0)
    for mu, c in envelope:
        base = mu * ld
        if base >= 1:
            return mpmath.inf
        total += c * scale * ld / (1 - base)
    return total


def _ordered_sum(
    params: LucasParams,
    s: MultiComplexPoint,
    modulus: int,
    residues: Sequence[int],
    eps,
    prec: int,
    position_weights: Sequence[Callable[[int], mpmath.mpc] | None] | None = None,
    gap_multipliers: Sequence[mpmath.mpc] | None = None,
) -> EvalResult:
    d = s.depth
    margin = domain_margin(s)
    if margin <= 0:
        raise OutOfDomain("point is not strictly inside the convergence domain")
    eps = mpmath.mpf(eps)
    cache = sequence_for(params)
    weights = position_weights or [None] * d
    gaps = list(gap_multipliers) if gap_multipliers is not None else [None] * d
    q = modulus

    with mp.workprec(prec + GUARD_BITS):
        coords = list(s.coords)
        sigmas = [mpmath.re(z) for z in coords]
        alpha = params.alpha.to_mpf()
        # bump for geometric envelopes; keeps (1+eta)^d well below alpha^margin
        eta = min(mpmath.mpf("0.05"), (alpha ** (margin / 2) - 1) / (2 * (d + 1)))
        gap_q = [None if g is None else g ** q for g in gaps]
        gap_r = [None if g is None else g ** r for g, r in zip(gaps, residues)]

        # C_j stored as a list indexed by x; C_0(x) = 1 on x = 0 mod q (x >= 0)
        c_hist = [[mpmath.mpc(0)] for _ in range(d)]  # C_j(0) = 0 for j >= 1
        g1 = gaps[0]
        b_abs = [mpmath.mpf(1)] + [mpmath.mpf(0)] * d  # unweighted majorant B_j
        total = mpmath.mpc(0)

        def c_at(j, x):
            if x < 0:
                return 0
            if j == 0:
                # C_0(x) = g_1^x on x = 0 mod q
                if x % q:
                    return 0
                return 1 if g1 is None else g1 ** x
            return c_hist[j][x]

        m = 0
        tail = mpmath.inf
        next_check = 8
        while True:
            m += 1
            if m > MAX_TERMS:
                raise AccuracyUnreachable(
                    f"tail bound {mpmath.nstr(tail, 5)} still above {mpmath.nstr(eps, 5)} "
                    f"after {MAX_TERMS} terms"
                )
            u = cache[m]
            log_u = mpmath.log(mpmath.mpf(u.numerator)) - mpmath.log(u.denominator)
            new_a = []
            for j in range(1, d + 1):
                prev = c_at(j - 1, m - residues[j - 1])
                if prev == 0:
                    a_j = mpmath.mpc(0)
                else:
                    a_j = mpmath.exp(-coords[j - 1] * log_u) * prev
                    if gap_r[j - 1] is not None:
                        a_j *= gap_r[j - 1]
                    w = weights[j - 1]
                    if w is not None:
                        a_j *= w(m)
                new_a.append(a_j)
            for j in range(1, d):
                # C_j(m) = g_{j+1}^q C_j(m - q) + a_j(m)
                prev = c_hist[j][m - q] if m - q >= 0 else 0
                if prev and gap_q[j] is not None:
                    prev = prev * gap_q[j]
                c_hist[j].append(prev + new_a[j - 1])
            total += new_a[d - 1]
            # unweighted majorant over all increasing tuples
            for j in range(d, 0, -1):
                b_abs[j] += b_abs[j - 1] * mpmath.exp(-sigmas[j - 1] * log_u)

            if m >= next_check:
                next_check = m + max(4, m // 8)
                a_lo, a_hi = _growth_bounds(params, m)
                tail = _tail_bound(b_abs[:d], mpmath.mpf(u.numerator) / u.denominator,
                                   sigmas, a_lo, a_hi, eta)
                if tail <= eps:
                    break

        rounding = b_abs[d] * mpmath.ldexp(1, -(prec + GUARD_BITS) + 4) * (d + 2) * m
        rounding += abs(total) * mpmath.ldexp(1, -prec)

    with mp.workprec(prec):
        return EvalResult(
            value=+total,
            truncation_tail_bound=tail,
            terms_used=m,
            rounding_bound=rounding,
            precision=prec,
        )


def direct_multiple_zeta(params: LucasParams, s, eps=mpmath.mpf("1e-30"), prec: int = 128) -> EvalResult:
    """sum over 0 < n_1 < ... < n_d of prod U_{n_i}^{-s_i}."""
    s = as_point(s)
    return _ordered_sum(params, s, 1, [1] * s.depth, eps, prec)


def direct_shifted_zeta(
    params: LucasParams, shift: ShiftSpec, s, eps=mpmath.mpf("1e-30"), prec: int = 128
) -> EvalResult:
    """sum over n_i >= 0 of prod_i U_{q(n_1+..+n_i) + (r_1+..+r_i)}^{-s_i}."""
    s = as_point(s)
    if shift.depth != s.depth:
        raise ValueError("shift and point depths differ")
    return _ordered_sum(params, s, shift.modulus, shift.residues, eps, prec)


def direct_dirichlet_L(
    params: LucasParams,
    chis: Sequence[DirichletCharacter],
    s,
    eps=mpmath.mpf("1e-30"),
    prec: int = 128,
) -> EvalResult:
    s = as_point(s)
    if len(chis) != s.depth:
        raise ValueError("need one character per coordinate")
    check_common_modulus(chis)
    with mp.workprec(prec + GUARD_BITS):
        tables = [[chi.complex_value(x) for x in range(chi.modulus)] for chi in chis]
    weights = [(lambda m, t=t: t[m % len(t)]) for t in tables]
    return _ordered_sum(params, s, 1, [1] * s.depth, eps, prec, position_weights=weights)


def direct_additive_L(
    params: LucasParams, fs: AdditiveTuple, s, eps=mpmath.mpf("1e-30"), prec: int = 128
) -> EvalResult:
    s = as_point(s)
    if fs.depth != s.depth:
        raise ValueError("need one additive character per coordinate")
    fs.check_partial_products()
    with mp.workprec(prec + GUARD_BITS):
        gaps = [fs.partial_product(j, prec + GUARD_BITS) for j in range(1, fs.depth + 1)]
    return _ordered_sum(params, s, 1, [1] * s.depth, eps, prec, gap_multipliers=gaps)
