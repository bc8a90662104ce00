"""Exception hierarchy shared by every module in the package."""


class SeverityError(Exception):
    """Base class for all package errors."""


class DomainError(SeverityError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class InfiniteQuantileError(SeverityError, ArithmeticError):
    """A quantile was requested at probability level 1 of an unbounded law.

    Kept separate from :class:`DomainError` because the request itself is
    legal; the answer is simply +inf.
    """


class DegenerateError(SeverityError, ValueError):
    """A construction or statistic collapsed (zero mass, zero moment, ...)."""


class NonIdentifiableError(SeverityError):
    """The data carry no information about the tail parameter."""


class CaseError(SeverityError, ValueError):
    """Trimming proportions sit in an arrangement the estimator cannot use."""


class FeasibilityError(SeverityError, ValueError):
    """An efficiency query violates the arrangement constraints."""


class SolverError(SeverityError, ArithmeticError):
    """A bracketed root search failed; ``bracket`` records the last interval."""

    def __init__(self, message, bracket=None):
        super().__init__(message)
        self.bracket = bracket


class DataError(SeverityError, ValueError):
    """Input data violate the requirements of the observation scheme."""


class ConfigError(SeverityError, ValueError):
    """A run configuration failed validation; ``problems`` lists every issue."""

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))
