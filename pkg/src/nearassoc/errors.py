"""Exception hierarchy shared by every module."""


class AlgebraError(Exception):
    """Base class for all library errors."""


class ContextMismatch(AlgebraError, TypeError):
    pass


class DivisionByZero(AlgebraError, ZeroDivisionError):
    pass


class DimensionMismatch(AlgebraError, ValueError):
    pass


class ParseError(AlgebraError, ValueError):
    def __init__(self, message, line=None, column=None, path=None):
        self.line = line
        self.column = column
        self.path = path
        where = []
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column}")
        if path:
            where.append(f"at {path}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)


class NotABimodule(AlgebraError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class NotAMatchedPair(AlgebraError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class NotARepresentation(AlgebraError):
    pass


class PostconditionFailed(AlgebraError):
    """A construction produced an object that fails the identity it must satisfy."""


class LRNotCommuting(AlgebraError):
    pass


class ConditionsFail(AlgebraError):
    def __init__(self, stage, message=None):
        self.stage = stage
        super().__init__(message or f"conditions fail at stage {stage!r}")


class DegenerateForm(AlgebraError):
    pass


class NotInvariant(AlgebraError):
    pass


class IntertwinerFails(AlgebraError):
    pass


class InvalidParams(AlgebraError, ValueError):
    pass


class NoSquareRoot(AlgebraError, ValueError):
    pass


class CharTwoFamilyIII(AlgebraError, ValueError):
    pass


class WrongDimension(DimensionMismatch):
    pass


class SearchSpaceTooLarge(AlgebraError):
    pass


class UnsupportedHomCase(AlgebraError, ValueError):
    """Raised by operations defined only for untwisted structures."""


class BaseIdentityWarning(UserWarning):
    """The base algebra of a bimodule does not satisfy its defining identity."""
