"""Exception hierarchy shared by every msc module."""


class MscError(Exception):
    """Base class for all calculator errors."""


# ring arithmetic

class NotAUnit(MscError, ArithmeticError):
    pass


class DenominatorVanishes(MscError, ZeroDivisionError):
    pass


class UnboundGenerator(MscError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


# language

class ParseError(MscError):
    """Error tied to a source position (1-based line and column)."""

    def __init__(self, message, line=None, col=None, source=None):
        self.message = message
        self.line = line
        self.col = col
        self.source = source
        super().__init__(self._format())

    def _format(self):
        where = []
        if self.source:
            where.append(str(self.source))
        if self.line is not None:
            where.append(f"{self.line}:{self.col}")
        prefix = ":".join(where)
        return f"{prefix}: {self.message}" if prefix else self.message


class StackSyntaxError(ParseError):
    pass


class DuplicateName(ParseError):
    pass


class UnknownName(ParseError):
    pass


class ArityError(ParseError):
    pass


class FiberShapeError(ArityError):
    """Fibration fiber outside the licensed shapes (affine scheme or K(Ga,n))."""


class CyclicBinding(ParseError):
    pass


class InvalidDeclaration(ParseError):
    """Generator data that contradicts itself (e.g. class vs. count table)."""


# series

class InsufficientOrder(MscError):
    pass


# invariants

class MissingCountData(MscError):
    pass


class NotPrimePower(MscError, ValueError):
    pass


# oracle

class TooLarge(MscError):
    pass


class Unsupported(MscError):
    pass
