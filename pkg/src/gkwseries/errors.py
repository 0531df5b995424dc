"""Exception types shared across the package."""


class GKWError(Exception):
    """Base class for all errors raised by gkwseries."""


class PoleError(GKWError, ZeroDivisionError):
    """A rational function was evaluated exactly at a root of its denominator."""


class NearPoleError(GKWError, ArithmeticError):
    """The denominator is numerically indistinguishable from zero."""


class ParseError(GKWError, ValueError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", column {column})" if column is not None else ")")
        super().__init__(message + where)


class InternalInconsistency(GKWError, AssertionError):
    """An identity that holds by construction was violated; indicates a bug."""


class MissingDependency(GKWError, KeyError):
    """A cell needed by the recurrence has not been computed yet."""

    def __str__(self):
        return str(self.args[0]) if self.args else "missing dependency"


class ZeroSum(GKWError, ZeroDivisionError):
    pass


class DomainError(GKWError, ValueError):
    pass


class ConvergenceFailure(GKWError, RuntimeError):
    pass


class BudgetExceeded(GKWError, RuntimeError):
    pass
