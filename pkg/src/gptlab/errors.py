"""Exception hierarchy shared by every module."""


class GptLabError(Exception):
    """Base class; the CLI maps subclasses to exit codes."""

    exit_code = 1


class InputError(GptLabError):
    exit_code = 2


class DimensionMismatch(InputError):
    pass


class IndexOutOfRange(InputError):
    pass


class BadParameter(InputError):
    pass


class MalformedProgram(InputError):
    pass


class ParseError(InputError):
    def __init__(self, message, line=None, field=None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)
        self.line = line
        self.field = field


class ValidationError(InputError):
    """A state-space invariant failed; ``invariant`` names it."""

    def __init__(self, invariant, message=""):
        super().__init__(f"{invariant}: {message}" if message else invariant)
        self.invariant = invariant


class ConeError(GptLabError):
    pass


class NotPointed(ConeError):
    pass


class NotFullDimensional(ConeError):
    pass


class Degenerate(GptLabError):
    pass


# the self-duality pipeline uses this name for the same condition
DegenerateSpace = Degenerate


class ActionNotClosed(GptLabError):
    pass


class NotTransitive(GptLabError):
    pass


class NotDistinguishable(GptLabError):
    pass


class NotBitSymmetric(GptLabError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class ImproperEffect(InputError):
    pass


class BudgetExceeded(GptLabError):
    exit_code = 3
