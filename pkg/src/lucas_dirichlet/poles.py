"""Singular hyperplanes, closed-form residues and their contour verification.

Residues are taken on one-variable slices: every coordinate but one (by
default the last) is held fixed and the residue is computed in the free
variable.  Since s_d(j) moves with unit speed along such a slice, the slice
residue is the restriction of (s_d(j) - a) F to the hyperplane.

On the hyperplane s_d(j) = a with k-sum K' and index n, Y_j = zeta_q^{-n},
so every outer factor t < j of the shifted product picks up zeta_q^{-n r_t}
and collapses to the depth j - 1 series, the j-th factor has residue
zeta_q^{-n r_j}/(q log alpha), and the inner factors t > j only see the
finitely many (k_j..k_d) with k_j + ... + k_d = K'.  For additive
characters g_j Y_j = 1 on the hyperplane and the j-th residue is 1/log alpha.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import mpmath
from mpmath import mp

from .characters import (
    AdditiveTuple,
    DirichletCharacter,
    check_common_modulus,
    gauss_vanishing_check,
)
from .continuation import (
    TruncationPolicy,
    additive_L_cont,
    additive_phi,
    dirichlet_L_cont,
    log_y_rows,
    run_chain,
    shifted_phi,
    shifted_zeta_cont,
    signed_binomials,
)
from .errors import (
    InnerPole,
    NoConvergence,
    NonIsolatedPole,
    PoleProximity,
    PrincipalCharacter,
    ZeroCharacterValue,
)
from .hyperplanes import PoleFamily, additive_family, zeta_family
from .lucas import LucasParams
from .points import MultiComplexPoint, ShiftSpec, to_mpc

# Floor of the relative-error denominator, so vanishing residues are compared absolutely.
TINY = mpmath.mpf("1e-12")
RESIDUE_POLICY = TruncationPolicy(eps=mpmath.mpf("1e-18"))


@dataclass(frozen=True)
class PoleHyperplane:
    variant: str
    j: int
    k_sum: int
    n: int
    ell: int
    location: mpmath.mpc
    k_multi: tuple = ()
    generators: tuple = ()  # every (k_sum, n) naming this location

    def as_dict(self) -> dict:
        return {
            "variant": self.variant,
            "j": self.j,
            "k_sum": self.k_sum,
            "n": self.n,
            "ell": self.ell,
            "location": self.location,
            "generators": [list(g) for g in self.generators],
        }


@dataclass
class ResidueValue:
    closed_form: mpmath.mpc
    numeric_check: mpmath.mpc | None
    rel_error: mpmath.mpf | None
    location: mpmath.mpc = field(default=None)
    radius: mpmath.mpf | None = None
    nodes: int = 0

    @classmethod
    def compare(cls, closed, numeric, **extra) -> ResidueValue:
        rel = None
        if numeric is not None:
            rel = abs(closed - numeric) / max(abs(closed), TINY)
        return cls(closed, numeric, rel, **extra)


# -- enumeration -----------------------------------------------------------


def _in_window(z, window, tol) -> bool:
    if window is None:
        return True
    re_lo, re_hi, im_lo, im_hi = (mpmath.mpf(w) for w in window)
    return re_lo - tol <= z.real <= re_hi + tol and im_lo - tol <= z.imag <= im_hi + tol


def _enumerate(fam: PoleFamily, variant, j, k_bound, n_bound, window, prec) -> list:
    tol = mpmath.ldexp(1, -(prec - 16))
    found: list[tuple[mpmath.mpc, list]] = []
    for k in range(k_bound + 1):
        for n in range(-n_bound, n_bound + 1):
            z = fam.location(k, n)
            if not _in_window(z, window, tol):
                continue
            for loc, gens in found:
                if abs(loc - z) <= tol * max(1, abs(z)):
                    gens.append((k, n))
                    break
            else:
                found.append((z, [(k, n)]))
    out = []
    for z, gens in found:
        k, n = gens[0]
        out.append(PoleHyperplane(variant, j, k, n, fam.ell(k), z, generators=tuple(gens)))
    out.sort(key=lambda p: (-p.location.real, p.location.imag))
    return out


def enumerate_poles_zeta(
    params: LucasParams,
    q: int,
    j: int,
    k_bound: int,
    n_bound: int,
    window=None,
    prec: int = 128,
    variant: str = "shifted-zeta",
) -> list[PoleHyperplane]:
    """Hyperplanes s_d(j) = -2K + K log|Q|/log(alpha) + (2n/q + l) pi i/log(alpha).

    ``window`` is (re_min, re_max, im_min, im_max) or None.
    """
    with mp.workprec(prec):
        return _enumerate(zeta_family(params, q, prec), variant, j, k_bound, n_bound, window, prec)


def enumerate_poles_additive(
    params: LucasParams, fs: AdditiveTuple, j: int, k_bound: int, n_bound: int,
    window=None, prec: int = 128,
) -> list[PoleHyperplane]:
    """Hyperplanes of the additive family; principal log(g_j), branch absorbed into n."""
    with mp.workprec(prec):
        g = fs.partial_product(j, prec + 10)
        if g == 0:
            raise ZeroCharacterValue(f"g_{j} vanishes")
        return _enumerate(additive_family(params, g, prec), "additive", j, k_bound, n_bound,
                          window, prec)


# -- numeric residues ------------------------------------------------------


def numeric_residue(
    evaluator: Callable,
    a,
    rho,
    prec: int = 128,
    tol=mpmath.mpf("1e-14"),
    other_poles: Sequence = (),
    initial_nodes: int = 16,
    max_nodes: int = 1024,
) -> tuple[mpmath.mpc, int]:
    """(1/2 pi i) times the contour integral over |s - a| = rho, by the trapezoid rule.

    Nodes double (reusing the previous ones) until two successive estimates agree
    to ``tol`` relative to max(|I|, rho * max|F|).  Returns (value, nodes).
    """
    with mp.workprec(prec):
        a = to_mpc(a)
        rho = mpmath.mpf(rho)
        for p in other_poles:
            if abs(to_mpc(p) - a) <= rho:
                raise NonIsolatedPole(f"another pole at {mpmath.nstr(p, 10)} lies within radius {rho}")
        values: dict[int, mpmath.mpc] = {}  # keyed by node index at max_nodes resolution
        scale = mpmath.mpf(0)

        def integral(m):
            nonlocal scale
            stride = max_nodes // m
            total = mpmath.mpc(0)
            for i in range(m):
                idx = i * stride
                if idx not in values:
                    w = rho * mpmath.expjpi(mpmath.mpf(2 * idx) / max_nodes)
                    fv = evaluator(a + w)
                    values[idx] = fv * w
                    scale = max(scale, abs(fv) * rho)
                total += values[idx]
            return total / m

        m = initial_nodes
        prev = integral(m)
        while m < max_nodes:
            m *= 2
            cur = integral(m)
            if abs(cur - prev) <= tol * max(abs(cur), scale):
                return cur, m
            prev = cur
        raise NoConvergence(f"trapezoid estimates still differ by {mpmath.nstr(abs(cur - prev), 5)}")


def _slice_radius(families: Sequence[tuple[PoleFamily, mpmath.mpc]], a) -> mpmath.mpf:
    """min(0.05, half the distance from ``a`` to the nearest other pole of the slice.

    Each entry is (family, offset) with the slice pole set  family.location - offset.
    """
    nearest = mpmath.inf
    for fam, offset in families:
        z = a + offset
        _, k0, n0 = fam.nearest(z)
        for k in range(max(0, k0 - 2), k0 + 3):
            base = fam.location(k, 0)
            nc = int(mpmath.nint((z.imag - base.imag) / fam.step))
            for n in range(nc - 2, nc + 3):
                dist = abs(fam.location(k, n) - z)
                if dist > mpmath.mpf("1e-20"):
                    nearest = min(nearest, dist)
    return min(mpmath.mpf("0.05"), nearest / 2)


def _complete_point(others: Sequence, slice_index: int, value) -> MultiComplexPoint:
    coords = list(others)
    coords.insert(slice_index - 1, value)
    return MultiComplexPoint(coords)


def _slice_value(others, slice_index: int, j: int, d: int, a) -> mpmath.mpc:
    """The slice coordinate putting s_j + ... + s_d on ``a``."""
    fixed = [to_mpc(x) for x in others]
    coords = fixed[: slice_index - 1] + [mpmath.mpc(0)] + fixed[slice_index - 1:]
    rest = mpmath.fsum(coords[i] for i in range(j - 1, d) if i != slice_index - 1)
    return a - rest


def _slice_families(fams: Sequence[PoleFamily], others, slice_index: int) -> list:
    """(family_t, offset_t) for the suffix sums containing the slice variable."""
    d = len(others) + 1
    fixed = [to_mpc(x) for x in others]
    coords = fixed[: slice_index - 1] + [mpmath.mpc(0)] + fixed[slice_index - 1:]
    out = []
    for t in range(1, slice_index + 1):
        offset = mpmath.fsum(coords[t - 1:d])
        out.append((fams[t - 1], offset))
    return out


def _check_slice(j, slice_index, d):
    if not 1 <= j <= d:
        raise ValueError(f"j must lie in 1..{d}")
    if not j <= slice_index <= d:
        raise ValueError("the slice variable must belong to s_j + ... + s_d")


# -- closed forms ----------------------------------------------------------


def _inner_chain_value(params, s_star: MultiComplexPoint, j: int, k_sum: int, phi_rows) -> mpmath.mpc:
    """sum over k_j + ... + k_d = k_sum of prod_{i >= j} b_i(k_i) prod_{t > j} phi_t(K_t)."""
    d = s_star.depth
    binoms = [signed_binomials(s_star.coords[i], k_sum) for i in range(j - 1, d)]
    ones = [mpmath.mpc(1)] * (k_sum + 1)
    phis = [{0: ones}] + [{0: row} for row in phi_rows]
    trans = [[(0, 0, 1, 0)] for _ in range(d - j + 1)]
    return run_chain(binoms, phis, trans, k_sum, mpmath.fdot, {0})[0][k_sum]


def _depth_prefix(evaluate: Callable, label: str):
    try:
        return evaluate()
    except PoleProximity as exc:
        raise InnerPole(f"the depth-{label} factor is singular: {exc}") from exc


def shifted_residue_closed(
    params: LucasParams,
    shift: ShiftSpec,
    j: int,
    k_sum: int,
    n: int,
    others: Sequence,
    prec: int = 128,
    slice_index: int | None = None,
    policy: TruncationPolicy = RESIDUE_POLICY,
) -> tuple[mpmath.mpc, mpmath.mpc]:
    """(closed-form residue, pole location a) of the shifted series at (j, K', n)."""
    d = shift.depth
    slice_index = slice_index or d
    _check_slice(j, slice_index, d)
    q = shift.modulus
    with mp.workprec(prec + 20):
        fam = zeta_family(params, q)
        a = fam.location(k_sum, n)
        s_star = _complete_point(others, slice_index, _slice_value(others, slice_index, j, d, a))
        if j > 1:
            prefix = _depth_prefix(
                lambda: shifted_zeta_cont(
                    params, ShiftSpec(q, shift.residues[: j - 1]), s_star.prefix(j - 1), policy, prec
                ).value,
                str(j - 1),
            )
        else:
            prefix = mpmath.mpc(1)
        rows = log_y_rows(params, s_star, k_sum)
        phi_rows = [[shifted_phi(ly, shift.residues[t - 1], q) for ly in rows[t - 1]]
                    for t in range(j + 1, d + 1)]
        inner = _inner_chain_value(params, s_star, j, k_sum, phi_rows)
        twist = mpmath.expjpi(mpmath.mpf(-2 * n * shift.prefix_sum(j)) / q)
        value = (prefix * mpmath.exp(a * params.log_d() / 2) * inner * twist
                 / (q * params.log_alpha()))
    with mp.workprec(prec):
        return +value, +a


def _dirichlet_closed(params, chis, j, k_sum, n, others, prec, slice_index, policy):
    q = check_common_modulus(chis)
    d = len(chis)
    with mp.workprec(prec + 20):
        tables = [[chi.complex_value(x) for x in range(q)] for chi in chis]
        total = mpmath.mpc(0)
        a = None
        for rs in itertools.product(range(1, q + 1), repeat=d):
            w = mpmath.mpc(1)
            run = 0
            for table, r in zip(tables, rs):
                run += r
                w *= table[run % q]
                if w == 0:
                    break
            if w == 0:
                continue
            term, a = shifted_residue_closed(params, ShiftSpec(q, rs), j, k_sum, n, others,
                                             prec + 20, slice_index, policy)
            total += w * term
        if a is None:
            a = zeta_family(params, q).location(k_sum, n)
    with mp.workprec(prec):
        return +total, +a


def _dirichlet_numeric(params, chis, j, a, others, prec, slice_index, policy):
    q = chis[0].modulus
    d = len(chis)
    with mp.workprec(prec):
        fams = [zeta_family(params, q)] * d
        center = _slice_value(others, slice_index, j, d, a)
        rho = _slice_radius(_slice_families(fams, others, slice_index), center)

        def f(x):
            return dirichlet_L_cont(params, chis, _complete_point(others, slice_index, x),
                                    policy, prec).value

        value, nodes = numeric_residue(f, center, rho, prec)
    return value, rho, nodes


def residue_dirichlet_last(
    params: LucasParams,
    chis: Sequence[DirichletCharacter],
    partial: Sequence,
    k_sum: int,
    n: int,
    prec: int = 128,
    numeric: bool = True,
    policy: TruncationPolicy = RESIDUE_POLICY,
) -> ResidueValue:
    """Residue in s_d on s_d = a with k' = k_sum, the depth d - 1 factor at ``partial``."""
    d = len(chis)
    if len(partial) != d - 1:
        raise ValueError(f"need {d - 1} fixed coordinates")
    closed, a = _dirichlet_closed(params, chis, d, k_sum, n, partial, prec, d, policy)
    return _finish(params, chis, d, a, partial, prec, d, policy, closed, numeric)


def residue_dirichlet_inner(
    params: LucasParams,
    chis: Sequence[DirichletCharacter],
    j: int,
    k_multi: Sequence[int],
    n: int,
    others: Sequence,
    prec: int = 128,
    numeric: bool = True,
    slice_index: int | None = None,
    policy: TruncationPolicy = RESIDUE_POLICY,
) -> ResidueValue:
    """Residue on s_j + ... + s_d = a, j < d; only k_j + ... + k_d enters."""
    d = len(chis)
    if not 1 <= j < d:
        raise ValueError("inner residues need 1 <= j < d")
    if len(k_multi) != d - j + 1 or any(k < 0 for k in k_multi):
        raise ValueError(f"need {d - j + 1} non-negative k values")
    if len(others) != d - 1:
        raise ValueError(f"need {d - 1} fixed coordinates")
    slice_index = slice_index or d
    closed, a = _dirichlet_closed(params, chis, j, sum(k_multi), n, others, prec, slice_index, policy)
    return _finish(params, chis, j, a, others, prec, slice_index, policy, closed, numeric)


def _finish(params, chis, j, a, others, prec, slice_index, policy, closed, numeric):
    if not numeric:
        return ResidueValue(closed, None, None, location=a)
    value, rho, nodes = _dirichlet_numeric(params, chis, j, a, others, prec, slice_index, policy)
    with mp.workprec(prec):
        return ResidueValue.compare(closed, value, location=a, radius=rho, nodes=nodes)


def additive_residue_closed(
    params: LucasParams,
    fs: AdditiveTuple,
    j: int,
    k_sum: int,
    n: int,
    others: Sequence,
    prec: int = 128,
    slice_index: int | None = None,
    policy: TruncationPolicy = RESIDUE_POLICY,
) -> tuple[mpmath.mpc, mpmath.mpc]:
    d = fs.depth
    slice_index = slice_index or d
    _check_slice(j, slice_index, d)
    with mp.workprec(prec + 20):
        g_j = fs.partial_product(j)
        a = additive_family(params, g_j).location(k_sum, n)
        s_star = _complete_point(others, slice_index, _slice_value(others, slice_index, j, d, a))
        if j > 1:
            head = AdditiveTuple(fs.characters[: j - 1])
            prefix = _depth_prefix(
                lambda: additive_L_cont(params, head, s_star.prefix(j - 1), policy, prec,
                                        check_bound=False).value,
                str(j - 1),
            )
        else:
            prefix = mpmath.mpc(1)
        rows = log_y_rows(params, s_star, k_sum)
        phi_rows = []
        for t in range(j + 1, d + 1):
            log_g = mpmath.log(fs.partial_product(t))
            phi_rows.append([additive_phi(ly, log_g) for ly in rows[t - 1]])
        inner = _inner_chain_value(params, s_star, j, k_sum, phi_rows)
        value = prefix * mpmath.exp(a * params.log_d() / 2) * inner / params.log_alpha()
    with mp.workprec(prec):
        return +value, +a


def _additive_result(params, fs, j, k_sum, n, others, prec, slice_index, policy, numeric):
    d = fs.depth
    closed, a = additive_residue_closed(params, fs, j, k_sum, n, others, prec, slice_index, policy)
    if not numeric:
        return ResidueValue(closed, None, None, location=a)
    with mp.workprec(prec):
        fams = [additive_family(params, fs.partial_product(t)) for t in range(1, d + 1)]
        center = _slice_value(others, slice_index, j, d, a)
        rho = _slice_radius(_slice_families(fams, others, slice_index), center)

        def f(x):
            return additive_L_cont(params, fs, _complete_point(others, slice_index, x), policy,
                                   prec, check_bound=False).value

        value, nodes = numeric_residue(f, center, rho, prec)
        return ResidueValue.compare(closed, value, location=a, radius=rho, nodes=nodes)


def residue_additive_last(
    params: LucasParams,
    fs: AdditiveTuple,
    partial: Sequence,
    k_sum: int,
    n: int = 0,
    prec: int = 128,
    numeric: bool = True,
    policy: TruncationPolicy = RESIDUE_POLICY,
) -> ResidueValue:
    d = fs.depth
    if len(partial) != d - 1:
        raise ValueError(f"need {d - 1} fixed coordinates")
    return _additive_result(params, fs, d, k_sum, n, partial, prec, d, policy, numeric)


def residue_additive_inner(
    params: LucasParams,
    fs: AdditiveTuple,
    j: int,
    k_multi: Sequence[int],
    n: int,
    others: Sequence,
    prec: int = 128,
    numeric: bool = True,
    slice_index: int | None = None,
    policy: TruncationPolicy = RESIDUE_POLICY,
) -> ResidueValue:
    d = fs.depth
    if not 1 <= j < d:
        raise ValueError("inner residues need 1 <= j < d")
    if len(k_multi) != d - j + 1 or any(k < 0 for k in k_multi):
        raise ValueError(f"need {d - j + 1} non-negative k values")
    if len(others) != d - 1:
        raise ValueError(f"need {d - 1} fixed coordinates")
    return _additive_result(params, fs, j, sum(k_multi), n, others, prec, slice_index or d,
                            policy, numeric)


# -- real axis ---------------------------------------------------------------


def real_axis_candidates(params: LucasParams, q: int, re_bounds, prec: int = 128) -> list[tuple[int, int]]:
    """(K, n) whose hyperplane value is real and inside ``re_bounds``.

    Real values need 2n/q + l = 0, i.e. n = -q l/2 with l = K for Q < 0, else 0.
    """
    lo, hi = (mpmath.mpf(x) for x in re_bounds)
    with mp.workprec(prec):
        fam = zeta_family(params, q)
        k_max = int(mpmath.floor(lo / fam.slope))
        out = []
        for k in range(0, k_max + 1):
            x = fam.slope * k
            if not lo <= x <= hi:
                continue
            ell = fam.ell(k)
            if (q * ell) % 2:
                continue
            out.append((k, -(q * ell) // 2))
    return out


def real_axis_holomorphy_report(
    chi: DirichletCharacter, params: LucasParams, q: int | None = None, re_bounds=(-6, 1),
    prec: int = 128,
) -> dict:
    """Certify exactly that tau(chi, n) = 0 for every real-axis pole candidate."""
    if chi.is_principal:
        raise PrincipalCharacter("the real-axis statement concerns non-principal characters")
    q = q or chi.modulus
    if q != chi.modulus:
        raise ValueError("q must equal the character modulus")
    entries = []
    with mp.workprec(prec):
        fam = zeta_family(params, q)
        for k, n in real_axis_candidates(params, q, re_bounds, prec):
            predicted, actual = gauss_vanishing_check(chi, n)
            entries.append({
                "k_sum": k,
                "n": n,
                "ell": fam.ell(k),
                "location": fam.location(k, n).real,
                "gcd": math.gcd(n, q),
                "predicted_zero": predicted,
                "tau_is_zero": actual,
            })
    return {
        "character": chi.label(),
        "params": str(params),
        "re_bounds": [str(b) for b in re_bounds],
        "candidates": entries,
        "certified": all(e["tau_is_zero"] for e in entries),
    }
