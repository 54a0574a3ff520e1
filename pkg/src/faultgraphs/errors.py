"""Exception hierarchy.

`ParseError` subclasses signal malformed input text (CLI exit code 1).
Everything else under `FaultGraphError` is a semantic failure (exit code 2).
"""


class FaultGraphError(Exception):
    """Base class for all library errors."""


class ParseError(FaultGraphError):
    """Input text could not be read."""


class FtSyntaxError(ParseError):
    def __init__(self, message, line, col):
        super().__init__(f'line {line}, col {col}: {message}')
        self.line = line
        self.col = col


class ModelError(FaultGraphError, ValueError):
    """A parsed model violates a structural rule."""


class DuplicateDefinition(ModelError):
    pass


class UnresolvedReference(ModelError):
    pass


class CycleDetected(ModelError):
    pass


class MissingTop(ModelError):
    pass


class BadArity(ModelError):
    pass


class UnreachableNode(ModelError):
    pass


class UniverseMismatch(FaultGraphError, ValueError):
    pass


class TooManyVariables(FaultGraphError, ValueError):
    pass


class ProbabilityOutOfRange(ModelError):
    pass


NOT_FUNCTION_RATIONALE = 'FTs do not support a NOT function'


class NonMonotoneFunction(FaultGraphError, ValueError):
    def __init__(self, message='function is not monotone'):
        super().__init__(f'{message} ({NOT_FUNCTION_RATIONALE})')


class TrivialFunction(FaultGraphError, ValueError):
    pass


class SharedEventError(FaultGraphError, ValueError):
    pass


class OrderViolation(FaultGraphError, ValueError):
    pass


class OrderMismatch(FaultGraphError, ValueError):
    pass


class ManagerMismatch(FaultGraphError, ValueError):
    pass


class EmptyDataset(FaultGraphError, ValueError):
    pass


class EmptyCutSets(FaultGraphError, ValueError):
    pass


class UnsupportedArrow(FaultGraphError, ValueError):
    pass
