"""Exception hierarchy shared by all modules."""


class SolvlatError(ValueError):
    """Base class for every error raised by the package."""


class FieldMismatch(SolvlatError):
    pass


class DivisionByZero(SolvlatError, ZeroDivisionError):
    pass


class DimensionMismatch(SolvlatError):
    pass


class InvalidBeta(SolvlatError):
    pass


class InvalidSpec(SolvlatError):
    pass


class NotUnimodular(SolvlatError):
    pass


class WrongMinimalPolynomial(SolvlatError):
    pass


class WrongMultiplicities(SolvlatError):
    pass


class SingularTransform(SolvlatError):
    pass


class NotContaining(SolvlatError):
    """Some commutator is not an integer combination of the chosen basis."""


class SingularSystem(SolvlatError):
    pass


class DegenerateEigenbasis(SolvlatError):
    pass


class ParseError(SolvlatError):
    pass
