"""Exception hierarchy shared by all lenslab modules.

Every error raised on purpose by the library derives from :class:`LenslabError`,
so callers (and the CLI) can separate library failures from programming bugs.
"""


class LenslabError(Exception):
    """Base class for all library errors."""


class ParameterError(LenslabError, ValueError):
    """A parameter lies outside its admissible range."""


class DomainError(LenslabError, ValueError):
    """A point lies outside the domain of the function being evaluated."""


class PoleError(DomainError):
    """Evaluation at a pole."""


class EssentialSingularityError(DomainError):
    """Evaluation at an essential singularity."""


class UndefinedBoundaryValueError(DomainError):
    """The boundary function has no value at the requested angle."""


class NumericInstabilityError(LenslabError, ArithmeticError):
    """A self-validation check failed; ``discrepancy`` holds the measured error."""

    def __init__(self, message, discrepancy=None):
        super().__init__(message)
        self.discrepancy = discrepancy


class NumericError(LenslabError, ArithmeticError):
    """A linear-algebra or root-finding kernel failed."""


class ToleranceNotMetError(LenslabError):
    """An adaptive routine could not reach the requested tolerance."""


class InsufficientDataError(LenslabError):
    """Too few usable data points for a fit."""


class ConstructionError(LenslabError):
    """A geometric construction produced an invalid object."""


class ConstructionDomainError(ConstructionError):
    """A construction was applied outside the range where it is valid."""


class DominanceAssumptionError(LenslabError):
    """A validation scan contradicted a dominance assumption."""


class InterpolationError(LenslabError, ValueError):
    """A query point lies outside the sampled range."""


class BracketError(LenslabError):
    """A root bracket could not be established."""
