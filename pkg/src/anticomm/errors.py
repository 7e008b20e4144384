"""Exception hierarchy shared by every module of the package."""


class AnticommError(Exception):
    """Base class for all library errors."""


class DivisionByZero(AnticommError, ZeroDivisionError):
    pass


class UnorderedField(AnticommError):
    pass


class UnsupportedField(AnticommError):
    pass


class DimensionMismatch(AnticommError):
    pass


class FieldMismatch(AnticommError):
    pass


class NotSquare(AnticommError):
    pass


class SingularTransform(AnticommError):
    pass


class NotNilpotent(AnticommError):
    pass


class NotMonic(AnticommError):
    pass


class CharTwo(AnticommError):
    pass


class BadShape(AnticommError):
    pass


class RankTooLow(AnticommError):
    pass


class PairingFailed(AnticommError):
    pass


class BudgetExhausted(AnticommError):
    def __init__(self, message, attempts=0):
        super().__init__(message)
        self.attempts = attempts


class InvalidWitness(AnticommError):
    pass


class PreconditionViolated(AnticommError):
    pass


class AlphaIsSquare(AnticommError):
    pass


class FormulaMismatch(AnticommError):
    pass


class TooLarge(AnticommError):
    pass


class ParseError(AnticommError, ValueError):
    pass
