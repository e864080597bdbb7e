"""Exception types shared across the package."""

from __future__ import annotations


class RankCertError(Exception):
    """Base class for every error raised by rankcert."""


class FieldMismatchError(RankCertError, ValueError):
    """Operands live in different prime fields."""


class DimensionError(RankCertError, ValueError):
    """Shapes are incompatible for the requested operation."""


class InvalidParamsError(RankCertError, ValueError):
    """Construction parameters are rejected (non power of two, size cap, ...)."""


class HypothesisError(RankCertError):
    """A bound rule was invoked while one of its hypotheses is false."""


class InfeasibleError(RankCertError):
    """The exhaustive oracle refuses an instance that exceeds its search guard."""


class BudgetExceeded(RankCertError):
    """The oracle ran out of its work or wall-clock budget before finishing."""

    def __init__(self, message: str, solves: int, searched_up_to: int):
        super().__init__(message)
        self.solves = solves
        self.searched_up_to = searched_up_to


class TensorFormatError(RankCertError, ValueError):
    """A tensor text file could not be parsed."""
