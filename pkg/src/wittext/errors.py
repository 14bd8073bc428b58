"""Exception hierarchy shared by all modules."""


class WittExtError(Exception):
    """Base class for every error raised by this package."""


class FieldError(WittExtError, ValueError):
    pass


class NonPrime(FieldError):
    pass


class PrimeTooSmall(FieldError):
    pass


class ZeroConstant(FieldError):
    pass


class DivisionByZero(FieldError, ZeroDivisionError):
    pass


class NotInPrimeField(FieldError):
    pass


class IndexOutOfRange(WittExtError, IndexError):
    pass


class WrongFieldContext(WittExtError, ValueError):
    pass


class WeightNotInLambda(WittExtError, ValueError):
    pass


class UnsupportedHeight(WittExtError, ValueError):
    pass


class NotClassified(UnsupportedHeight):
    """Heights strictly between 1 and p-1 have no Ext classification."""


class NonzeroCharacter(WittExtError, ValueError):
    pass


class NotSimple(WittExtError, ValueError):
    pass


class MixedCharacters(WittExtError, ValueError):
    pass


class ConditionsViolated(WittExtError, ValueError):
    pass


class DimensionOverflow(WittExtError, RuntimeError):
    """The dense solver would exceed the configured size guard."""
