"""Meromorphic continuation of the shifted, Dirichlet and additive series.

Expanding U_n^{-s} = D^{s/2} alpha^{-ns} (1 - (Q/alpha^2)^n)^{-s} binomially and
summing the geometric series in n gives

    F(s) = D^{s_d(1)/2} sum_{k_1..k_d >= 0} prod_j C(-s_j, k_j) (-1)^{k_j} prod_t phi_t(K_t)

where K_t = k_t + ... + k_d and, with Y_t = Q^{K_t} alpha^{-(s_d(t) + 2 K_t)},

    shifted:   phi_t = Y_t^{r_t} / (1 - Y_t^q)
    additive:  phi_t = g_t Y_t / (1 - g_t Y_t),   g_t = f_t(1) ... f_d(1).

Only the suffix sums K_t enter phi, so the sum is a chain of convolutions

    G_d(K) = b_d(K) phi_d(K),   G_t(K) = phi_t(K) sum_k b_t(k) G_{t+1}(K - k)

with b_t(k) = C(-s_t, k)(-1)^k, and F = D^{s_d(1)/2} sum_K G_1(K).  Truncating
at K_1 <= K costs O(d K^2).  Dirichlet characters add a state R mod q (the
running residue r_1 + ... + r_t) carried through the chain.
"""

from __future__ import annotations

import math
import operator
from dataclasses import dataclass, replace
from typing import Callable, Sequence

import mpmath
from mpmath import mp

from .characters import AdditiveTuple, DirichletCharacter, check_common_modulus
from .errors import AccuracyUnreachable, PoleProximity
from .hyperplanes import PoleFamily, additive_family, zeta_family
from .lucas import LucasParams
from .points import EvalResult, MultiComplexPoint, ShiftSpec, as_point

GUARD_BITS = 32


@dataclass(frozen=True)
class TruncationPolicy:
    initial_cutoff: int = 16
    growth: int = 2
    max_cutoff: int = 4096
    eps: mpmath.mpf = mpmath.mpf("1e-20")
    rho_guard: mpmath.mpf = mpmath.mpf("1e-6")

    def __post_init__(self):
        if not self.eps > 0:
            raise ValueError("eps must be positive")
        if not self.rho_guard > 0:
            raise ValueError("rho_guard must be positive")
        if self.growth < 2:
            raise ValueError("growth factor must be at least 2")
        if self.initial_cutoff < 1 or self.max_cutoff < self.initial_cutoff:
            raise ValueError("need 1 <= initial_cutoff <= max_cutoff")

    def with_eps(self, eps) -> TruncationPolicy:
        return replace(self, eps=mpmath.mpf(eps))


DEFAULT_POLICY = TruncationPolicy()


def binom_complex(s, k: int) -> mpmath.mpc:
    """C(-s, k) = prod_{i<k} (-s - i)/(i + 1)."""
    value = mpmath.mpc(1)
    s = mpmath.mpc(s)
    for i in range(k):
        value = value * (-s - i) / (i + 1)
    return value


def signed_binomials(s, kmax: int) -> list:
    """b(k) = C(-s, k) (-1)^k for k = 0..kmax via b(k+1) = b(k) (s + k)/(k + 1)."""
    out = [mpmath.mpc(1)]
    for k in range(kmax):
        out.append(out[-1] * (s + k) / (k + 1))
    return out


# -- the convolution chain ------------------------------------------------

# A transition (src_state, dst_state, weight, phi_label) at one level.
Transition = tuple


def run_chain(binoms, phis, transitions, kmax: int, dot: Callable, start_states=None) -> dict:
    """G_1(K) for K = 0..kmax, keyed by starting state.

    ``binoms[t]`` and ``phis[t][label]`` are lists indexed by K; level d + 1 is
    the delta at K = 0 in every state.
    """
    d = len(binoms)
    nxt = None
    for t in range(d - 1, -1, -1):
        b = binoms[t]
        trans = transitions[t]
        if t == 0 and start_states is not None:
            trans = [tr for tr in trans if tr[0] in start_states]
        conv = {}
        for dst in {tr[1] for tr in trans}:
            if nxt is None:
                conv[dst] = b[: kmax + 1]
            else:
                g = nxt.get(dst)
                if g is None:
                    continue
                conv[dst] = [dot(b[: k + 1], g[k::-1]) for k in range(kmax + 1)]
        cur: dict = {}
        for src, dst, w, label in trans:
            h = conv.get(dst)
            if h is None:
                continue
            ph = phis[t][label]
            row = [w * ph[k] * h[k] for k in range(kmax + 1)]
            acc = cur.get(src)
            cur[src] = row if acc is None else [x + y for x, y in zip(acc, row)]
        nxt = cur
    return nxt


def _float_dot(a, b) -> float:
    return sum(map(operator.mul, a, b))


def _mp_dot(a, b):
    return mpmath.fdot(a, b)


def _abs_floats(values) -> list:
    return [float(abs(v)) for v in values]


def _ratio_tail(terms: Sequence[float]) -> float:
    """Geometric tail estimate past the last term from the trailing ratios."""
    kmax = len(terms) - 1
    window = max(4, kmax // 4)
    ratio = 0.0
    for k in range(max(1, kmax - window + 1), kmax + 1):
        if terms[k - 1] > 0:
            ratio = max(ratio, terms[k] / terms[k - 1])
        elif terms[k] > 0:
            return math.inf
    if terms[kmax] == 0:
        return 0.0
    if ratio >= 1:
        return math.inf
    return 2 * terms[kmax] * ratio / (1 - ratio)


@dataclass
class ChainProblem:
    """Everything the adaptive driver needs to build the chain at a cutoff."""

    s: MultiComplexPoint
    build_phis: Callable[[int], list]  # kmax -> per-level dict label -> list
    transitions: list
    start_state: object = 0


def _next_cutoff(kmax, tail, eps, terms, policy) -> int:
    grown = kmax * policy.growth
    if math.isfinite(tail) and tail > 0 and terms[-1] > 0 and terms[-2] > 0:
        ratio = terms[-1] / terms[-2]
        if 0 < ratio < 1:
            extra = math.log(float(eps) / (4 * tail)) / math.log(ratio)
            # leave room for the last-quarter delta test as well
            grown = min(grown, max(kmax + 8, math.ceil((kmax + extra) * 4 / 3)))
    return min(policy.max_cutoff, grown)


def evaluate_chain(
    params: LucasParams, problem: ChainProblem, policy: TruncationPolicy, prec: int
) -> EvalResult:
    """Adaptive driver: grow K until ratio tail and last-quarter delta are below eps/2."""
    s = problem.s
    d = s.depth
    eps = float(policy.eps)
    kmax = policy.initial_cutoff
    wp = prec + GUARD_BITS
    while True:
        with mp.workprec(wp):
            coords = [mpmath.mpc(z) for z in s.coords]
            prefactor = mpmath.exp(s.suffix(1) * params.log_d(wp) / 2)
            pref_abs = float(abs(prefactor))
            binoms = [signed_binomials(z, kmax) for z in coords]
            phis = problem.build_phis(kmax)

            # majorant pass in floats fixes the cutoff
            fb = [_abs_floats(b) for b in binoms]
            fphi = [{lab: _abs_floats(v) for lab, v in level.items()} for level in phis]
            ftrans = [[(a, b, float(abs(w)), lab) for a, b, w, lab in level]
                      for level in problem.transitions]
            major = run_chain(fb, fphi, ftrans, kmax, _float_dot, {problem.start_state})
            terms = [pref_abs * x for x in major.get(problem.start_state, [0.0] * (kmax + 1))]
            tail = _ratio_tail(terms)
            if tail > eps / 2:
                if kmax >= policy.max_cutoff:
                    raise AccuracyUnreachable(
                        f"tail estimate {tail:.3g} above {eps / 2:.3g} at cutoff {kmax}"
                    )
                kmax = _next_cutoff(kmax, tail, eps, terms, policy)
                continue

            series = run_chain(binoms, phis, problem.transitions, kmax, _mp_dot, {problem.start_state})
            g1 = series.get(problem.start_state, [mpmath.mpc(0)] * (kmax + 1))
            window = max(1, kmax // 4)
            head = mpmath.fsum(g1[: kmax + 1 - window])
            last = mpmath.fsum(g1[kmax + 1 - window:])
            delta = float(abs(prefactor * last))
            if delta > eps / 2:
                if kmax >= policy.max_cutoff:
                    raise AccuracyUnreachable(
                        f"partial sums still moving by {delta:.3g} at cutoff {kmax}"
                    )
                # the tail test passed, so a modest step usually suffices
                kmax = min(policy.max_cutoff, max(kmax + 4, math.ceil(kmax * 4 / 3)))
                continue

            mass = sum(terms)
            rounding = mass * 2.0 ** (-wp) * (8 * d + 4 * math.log2(kmax + 2))
            if rounding > eps / 4 and wp < prec + 4 * GUARD_BITS + 512:
                wp += max(16, math.ceil(math.log2(rounding / (eps / 8))))
                continue
            value = prefactor * (head + last)
        with mp.workprec(prec):
            return EvalResult(
                value=+value,
                truncation_tail_bound=mpmath.mpf(tail),
                terms_used=kmax,
                rounding_bound=mpmath.mpf(rounding) + abs(value) * mpmath.ldexp(1, -prec),
                precision=prec,
            )


# -- geometry shared by every variant ------------------------------------


def log_y_rows(params: LucasParams, s: MultiComplexPoint, kmax: int) -> list:
    """log Y_t(K) = K log|Q| - (s_d(t) + 2K) log(alpha) + i pi K [Q < 0]."""
    log_a = params.log_alpha()
    log_q = params.log_abs_q()
    turn = mpmath.pi if params.q_param < 0 else 0
    rows = []
    for t in range(1, s.depth + 1):
        z = s.suffix(t)
        rows.append([
            mpmath.mpc(k * log_q - (z.real + 2 * k) * log_a, -z.imag * log_a + turn * k)
            for k in range(kmax + 1)
        ])
    return rows


def shifted_phi(log_y, r: int, q: int):
    """Y^r / (1 - Y^q) from log Y, using expm1 near the poles."""
    return mpmath.exp(r * log_y) / -mpmath.expm1(q * log_y)


def additive_phi(log_y, log_g):
    w = log_y + log_g
    return mpmath.exp(w) / -mpmath.expm1(w)


def guard_poles(s: MultiComplexPoint, families: Sequence[PoleFamily], rho) -> None:
    """Raise PoleProximity when some suffix sum s_d(j) is within rho of family j."""
    for j, fam in enumerate(families, start=1):
        dist, k, n = fam.nearest(s.suffix(j))
        if dist < rho:
            raise PoleProximity(
                f"s_d({j}) is {mpmath.nstr(dist, 5)} from the pole hyperplane "
                f"k={k}, n={n} at {mpmath.nstr(fam.location(k, n), 15)}"
            )


# -- public evaluators ---------------------------------------------------


def shifted_zeta_cont(
    params: LucasParams,
    shift: ShiftSpec,
    s,
    policy: TruncationPolicy = DEFAULT_POLICY,
    prec: int = 128,
    guard: bool = True,
) -> EvalResult:
    s = as_point(s)
    if shift.depth != s.depth:
        raise ValueError("shift and point depths differ")
    q = shift.modulus
    if guard:
        fam = zeta_family(params, q, prec)
        guard_poles(s, [fam] * s.depth, policy.rho_guard)

    def build(kmax):
        rows = log_y_rows(params, s, kmax)
        return [{r: [shifted_phi(ly, r, q) for ly in row]}
                for row, r in zip(rows, shift.residues)]

    transitions = [[(0, 0, 1, r)] for r in shift.residues]
    return evaluate_chain(params, ChainProblem(s, build, transitions), policy, prec)


def multiple_zeta_cont(params: LucasParams, s, policy: TruncationPolicy = DEFAULT_POLICY,
                       prec: int = 128) -> EvalResult:
    s = as_point(s)
    return shifted_zeta_cont(params, ShiftSpec(1, [1] * s.depth), s, policy, prec)


def _character_transitions(chis: Sequence[DirichletCharacter], prec: int) -> list:
    q = chis[0].modulus
    out = []
    states = {0}
    for chi in chis:
        level = []
        values = [chi.complex_value(x, prec) for x in range(q)]
        for rho in sorted(states):
            for r in range(1, q + 1):
                w = values[(rho + r) % q]
                if w != 0:
                    level.append((rho, (rho + r) % q, w, r))
        out.append(level)
        states = {tr[1] for tr in level}
    return out


def dirichlet_L_cont(
    params: LucasParams,
    chis: Sequence[DirichletCharacter],
    s,
    policy: TruncationPolicy = DEFAULT_POLICY,
    prec: int = 128,
    guard: bool = True,
) -> EvalResult:
    """The character-weighted r-sum of shifted continuations, run as one chain."""
    s = as_point(s)
    if len(chis) != s.depth:
        raise ValueError("need one character per coordinate")
    q = check_common_modulus(chis)
    if guard:
        guard_poles(s, [zeta_family(params, q, prec)] * s.depth, policy.rho_guard)
    transitions = _character_transitions(chis, prec + GUARD_BITS)

    def build(kmax):
        rows = log_y_rows(params, s, kmax)
        return [{r: [shifted_phi(ly, r, q) for ly in row] for r in range(1, q + 1)} for row in rows]

    return evaluate_chain(params, ChainProblem(s, build, transitions), policy, prec)


def additive_L_cont(
    params: LucasParams,
    fs: AdditiveTuple,
    s,
    policy: TruncationPolicy = DEFAULT_POLICY,
    prec: int = 128,
    guard: bool = True,
    check_bound: bool = True,
) -> EvalResult:
    s = as_point(s)
    if fs.depth != s.depth:
        raise ValueError("need one additive character per coordinate")
    if check_bound:
        fs.check_partial_products()
    wp = prec + GUARD_BITS
    gs = [fs.partial_product(j, wp) for j in range(1, fs.depth + 1)]
    if guard:
        guard_poles(s, [additive_family(params, g, prec) for g in gs], policy.rho_guard)

    def build(kmax):
        rows = log_y_rows(params, s, kmax)
        out = []
        for row, g in zip(rows, gs):
            log_g = mpmath.log(g)
            out.append({0: [additive_phi(ly, log_g) for ly in row]})
        return out

    transitions = [[(0, 0, 1, 0)] for _ in range(fs.depth)]
    return evaluate_chain(params, ChainProblem(s, build, transitions), policy, prec)
