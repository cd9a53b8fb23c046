"""Evaluation points, shift data and numeric results shared by the evaluators."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import mpmath


def to_mpc(z) -> mpmath.mpc:
    if isinstance(z, str):
        return mpmath.mpmathify(z.replace(" ", "").replace("i", "j"))
    return mpmath.mpc(z)


@dataclass(frozen=True)
class MultiComplexPoint:
    coords: tuple

    def __init__(self, coords: Sequence):
        if not len(coords):
            raise ValueError("a point needs at least one coordinate")
        object.__setattr__(self, "coords", tuple(to_mpc(c) for c in coords))

    @property
    def depth(self) -> int:
        return len(self.coords)

    def suffix(self, j: int) -> mpmath.mpc:
        """s_j + ... + s_d with 1-based j; suffix(d + 1) == 0."""
        return mpmath.fsum(self.coords[j - 1:]) if j <= self.depth else mpmath.mpc(0)

    def suffix_sums(self) -> list:
        return [self.suffix(j) for j in range(1, self.depth + 1)]

    def prefix(self, j: int) -> MultiComplexPoint:
        return MultiComplexPoint(self.coords[:j])

    def replace_last(self, value) -> MultiComplexPoint:
        return MultiComplexPoint(self.coords[:-1] + (to_mpc(value),))

    def __iter__(self):
        return iter(self.coords)

    def __len__(self):
        return len(self.coords)


def as_point(s) -> MultiComplexPoint:
    if isinstance(s, MultiComplexPoint):
        return s
    if isinstance(s, (list, tuple)):
        return MultiComplexPoint(s)
    return MultiComplexPoint([s])


@dataclass(frozen=True)
class ShiftSpec:
    """Modulus q and residues r_1..r_d of the shifted series."""

    modulus: int
    residues: tuple[int, ...]

    def __init__(self, modulus: int, residues: Sequence[int]):
        residues = tuple(int(r) for r in residues)
        if modulus < 1:
            raise ValueError("modulus must be >= 1")
        if not residues or any(r < 1 for r in residues):
            raise ValueError("residues must be positive integers")
        object.__setattr__(self, "modulus", int(modulus))
        object.__setattr__(self, "residues", residues)

    @property
    def depth(self) -> int:
        return len(self.residues)

    def suffix(self, j: int) -> int:
        """r_j + ... + r_d (1-based)."""
        return sum(self.residues[j - 1:])

    def prefix_sum(self, j: int) -> int:
        """r_1 + ... + r_j."""
        return sum(self.residues[:j])


@dataclass
class EvalResult:
    value: mpmath.mpc
    truncation_tail_bound: mpmath.mpf
    terms_used: int
    rounding_bound: mpmath.mpf = field(default_factory=lambda: mpmath.mpf(0))
    precision: int = 0

    @property
    def error_bound(self) -> mpmath.mpf:
        return self.truncation_tail_bound + self.rounding_bound
