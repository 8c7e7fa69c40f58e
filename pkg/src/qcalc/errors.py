"""Exception hierarchy shared by every qcalc module."""


class QCalcError(Exception):
    """Base class for all library errors."""


class ZeroDenominator(QCalcError, ZeroDivisionError):
    pass


class NegativeIndexUndefined(QCalcError, ValueError):
    pass


class TailNotConverged(QCalcError):
    pass


class Divergent(QCalcError, ValueError):
    pass


class PreconditionViolated(QCalcError, ValueError):
    pass


class VarSetMismatch(QCalcError, ValueError):
    pass


class NonUnitConstantTerm(QCalcError, ZeroDivisionError):
    pass


class UnknownVariable(QCalcError, KeyError):
    pass


class OrderTooSmall(QCalcError, ValueError):
    pass


class ZeroPoint(QCalcError, ValueError):
    pass


class IndexOutOfRange(QCalcError, IndexError):
    pass


class IntegrandUndefined(QCalcError, ZeroDivisionError):
    pass


class PdeNotSatisfied(QCalcError):
    """The series does not satisfy the q-PDE system; ``residual`` holds the offending series."""

    def __init__(self, message, residual=None, pair=None):
        super().__init__(message)
        self.residual = residual
        self.pair = pair


class UnknownIdentity(QCalcError, KeyError):
    pass


class ConstraintViolated(QCalcError, ValueError):
    pass


class EmptyDomain(QCalcError, ValueError):
    pass
