"""Shared exception types."""


class PolyconeError(Exception):
    """Base class for all library errors."""


class EmptyCone(PolyconeError):
    def __init__(self, class_index: int, msg: str = ""):
        self.class_index = class_index
        super().__init__(msg or f"coefficient cone of class {class_index} is empty")


class IncompatibleSimplex(PolyconeError):
    pass


class DimensionTooLarge(PolyconeError):
    pass


class ParseError(PolyconeError):
    def __init__(self, msg: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {msg}" if line is not None else msg)


class SemanticError(PolyconeError):
    pass


class UndeclaredSpecies(PolyconeError):
    pass


class EmptyNetwork(PolyconeError):
    pass


class DomainError(PolyconeError):
    pass


class BranchError(PolyconeError):
    pass


class RangeError(PolyconeError):
    pass


class DegenerateExponent(PolyconeError):
    pass


class ConditionViolated(PolyconeError):
    pass


class NotASolution(PolyconeError):
    pass


class InfeasibleRegion(PolyconeError):
    pass


class EmptyRegion(PolyconeError):
    pass
