"""Exception hierarchy.

``InputError`` subclasses describe bad arguments or malformed input and map to
exit code 1 in the CLI; ``NumericalError`` subclasses describe computations
that could not meet their accuracy contract and map to exit code 2.
"""


class GaussKitError(Exception):
    """Base class for every error raised by gausskit."""


class InputError(GaussKitError, ValueError):
    pass


class NumericalError(GaussKitError, ArithmeticError):
    pass


class InvalidDomain(InputError):
    pass


class InvalidParameter(InputError):
    pass


class ExpressionSyntaxError(InputError):
    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class UnknownSymbol(ExpressionSyntaxError):
    def __init__(self, name, position=None):
        self.name = name
        super().__init__(f"unknown symbol {name!r}", position)


class DuplicateNodes(InputError):
    pass


class OrderTooHigh(InputError):
    pass


class ZeroStep(InputError):
    pass


class FrequencyBound(InputError):
    pass


class NonConvergence(NumericalError):
    pass


class Singular(NumericalError):
    def __init__(self, message, pivot=None):
        self.pivot = pivot
        super().__init__(message)


class EdgeLeakage(NumericalError):
    pass
