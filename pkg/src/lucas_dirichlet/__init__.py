"""Multiple Lucas zeta and L-functions: direct sums, continuation, poles and special values."""

from .lucas import LucasParams, validate_params
from .points import EvalResult, MultiComplexPoint, ShiftSpec

__all__ = ["EvalResult", "LucasParams", "MultiComplexPoint", "ShiftSpec", "validate_params"]
