"""Exception hierarchy.

Everything raised on purpose derives from ``ThetaXiError``.  ``DomainError``
covers arguments outside the mathematical domain of an operation (CLI exit
code 2); ``ToleranceError`` covers numerical procedures that ran out of budget
before meeting their tolerance (CLI exit code 3).
"""


class ThetaXiError(Exception):
    """Base class for all library errors."""


class DomainError(ThetaXiError, ValueError):
    pass


class ToleranceError(ThetaXiError, ArithmeticError):
    pass


class PoleAtNonPositiveInteger(DomainError):
    pass


class PoleAtOne(DomainError):
    pass


class NonGenericParameter(DomainError):
    pass


class PolylogOnSingularity(DomainError):
    pass


class NumericalDegeneracy(DomainError):
    pass


class NearPole(DomainError):
    pass


class NotUnimodular(DomainError):
    pass


class AxisPole(DomainError):
    """The pole point is equivalent to a point of the positive imaginary axis."""


class NearPoleOnPath(DomainError):
    pass


class UnstableCutoff(DomainError):
    """Re(s) sits too close to a jump of one of the floor cutoffs."""


class ReductionStalled(ToleranceError):
    pass


class ToleranceNotMet(ToleranceError):
    pass


class UnderflowWarning(RuntimeWarning):
    """A result underflowed double precision and was returned as exact zero."""
