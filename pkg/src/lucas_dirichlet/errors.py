"""Exception hierarchy shared by every module."""


class LucasError(Exception):
    """Base class for all library errors."""


class ParameterError(LucasError, ValueError):
    pass


class QZero(ParameterError):
    pass


class NonPositiveP(ParameterError):
    pass


class ConstraintViolated(ParameterError):
    pass


class DivisibilityError(LucasError, ValueError):
    pass


class OutOfDomain(LucasError, ValueError):
    pass


class AccuracyUnreachable(LucasError, ArithmeticError):
    pass


class MixedModuli(LucasError, ValueError):
    pass


class PartialProductBound(LucasError, ValueError):
    pass


class PoleProximity(LucasError, ArithmeticError):
    pass


class InnerPole(LucasError, ArithmeticError):
    pass


class ZeroCharacterValue(LucasError, ValueError):
    pass


class NonIsolatedPole(LucasError, ValueError):
    pass


class NoConvergence(LucasError, ArithmeticError):
    pass


class PrincipalCharacter(LucasError, ValueError):
    pass


class SingularPoint(LucasError, ArithmeticError):
    pass


class NotRational(LucasError, AssertionError):
    """A special value expected to be rational carries a non-zero surd part."""


class SquareDiscriminant(LucasError, ValueError):
    pass


class NonQuadraticCharacter(LucasError, ValueError):
    pass


class NonRationalCharacter(LucasError, ValueError):
    pass


class RequiresValidation(UserWarning):
    """D is a perfect square: exact values are fine, rationality claims are not."""
