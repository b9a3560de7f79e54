"""Exception types shared across the workbench."""


class OrdError(Exception):
    """Base class for all domain errors."""


class ParseError(OrdError):
    def __init__(self, message, pos):
        super().__init__(f"{message} (column {pos})")
        self.pos = pos


class InvalidTerm(OrdError):
    pass


class NotPrincipal(OrdError):
    pass


class ZeroArg(OrdError):
    pass


class NotSpecial(OrdError):
    pass


class BadCut(OrdError):
    pass


class NotIrreducible(OrdError):
    pass


class ArityMismatch(OrdError):
    pass


class NoAttribute(OrdError):
    pass


class BadRho(OrdError):
    pass


class OutOfDomain(OrdError):
    pass


class NotInImage(OrdError):
    pass


class BudgetExceeded(OrdError):
    pass


class TooDeep(OrdError):
    pass


class SubtractionUnderflow(OrdError):
    pass
