"""Where the continued series are singular.

A suffix sum z = s_j + ... + s_d meets a pole of the shifted family when

    z = -2K + K*log|Q|/log(alpha) + (2n/q + l)*pi*i/log(alpha)

and of the additive family when

    z = -2K + log(g)/log(alpha) + K*log|Q|/log(alpha) + (2n + l)*pi*i/log(alpha)

with K >= 0 the k-sum, n any integer, l = K for Q < 0 and 0 otherwise, and
log the principal branch.  Both have the shape  K*(c - 2) + shift + i*(offset(K) + n*step).
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath
from mpmath import mp

from .lucas import LucasParams


@dataclass(frozen=True)
class PoleFamily:
    """Real and imaginary lattice data of one family of hyperplanes, at a fixed precision."""

    slope: mpmath.mpf  # c - 2 < 0, real part per unit K
    shift: mpmath.mpc  # log(g)/log(alpha), zero for the shifted family
    step: mpmath.mpf  # imaginary spacing in n
    half_turn: mpmath.mpf  # pi/log(alpha), multiplied by l(K)
    q_negative: bool

    def ell(self, k_sum: int) -> int:
        return k_sum if self.q_negative else 0

    def location(self, k_sum: int, n: int) -> mpmath.mpc:
        return (
            self.slope * k_sum
            + self.shift
            + mpmath.mpc(0, self.ell(k_sum) * self.half_turn + n * self.step)
        )

    def nearest(self, z, max_k: int | None = None) -> tuple[mpmath.mpf, int, int]:
        """(distance, K, n) of the hyperplane value closest to ``z``."""
        z = mpmath.mpc(z)
        x = (z.real - self.shift.real) / self.slope
        candidates = {max(0, int(mpmath.floor(x))), max(0, int(mpmath.ceil(x)))}
        if max_k is not None:
            candidates = {min(k, max_k) for k in candidates}
        best = None
        for k in sorted(candidates):
            base = self.location(k, 0)
            n = int(mpmath.nint((z.imag - base.imag) / self.step))
            dist = abs(z - self.location(k, n))
            if best is None or dist < best[0]:
                best = (dist, k, n)
        return best


def zeta_family(params: LucasParams, q: int, prec: int | None = None) -> PoleFamily:
    """Hyperplanes of the shifted (and Dirichlet) continuation with modulus q."""
    prec = prec or mp.prec
    with mp.workprec(prec):
        log_a = params.log_alpha(prec)
        return PoleFamily(
            slope=params.log_abs_q(prec) / log_a - 2,
            shift=mpmath.mpc(0),
            step=2 * mpmath.pi / (q * log_a),
            half_turn=mpmath.pi / log_a,
            q_negative=params.q_param < 0,
        )


def additive_family(params: LucasParams, g, prec: int | None = None) -> PoleFamily:
    """Hyperplanes of the additive continuation for the partial product ``g``."""
    prec = prec or mp.prec
    with mp.workprec(prec):
        log_a = params.log_alpha(prec)
        return PoleFamily(
            slope=params.log_abs_q(prec) / log_a - 2,
            shift=mpmath.log(mpmath.mpc(g)) / log_a,
            step=2 * mpmath.pi / log_a,
            half_turn=mpmath.pi / log_a,
            q_negative=params.q_param < 0,
        )
