"""Exception types shared across the package."""

from __future__ import annotations


class ConeinvError(Exception):
    """Base class for all errors raised by this package."""


class RingMismatchError(ConeinvError):
    """Operands live in different polynomial rings."""


class InexactDivisionError(ConeinvError):
    """Exact polynomial division was requested but the divisor does not divide."""


class SingularMatrixError(ConeinvError):
    """A linear change of coordinates was given a non-invertible matrix."""


class ConstantInputError(ConeinvError):
    """An operation that needs a non-constant polynomial received a constant."""


class HomogeneityError(ConeinvError):
    """An operation restricted to homogeneous input received a non-homogeneous one."""


class EmptyVarietyError(ConeinvError):
    """The ideal is the unit ideal: it defines the empty set."""


class ParseError(ConeinvError):
    """Syntax error in polynomial or ideal text.

    Carries 1-based ``line`` and ``column`` of the offending token.
    """

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class GenericityError(ConeinvError):
    """A randomized numeric computation exhausted its retries.

    Raised when no generic projection/base direction could be certified;
    the CLI maps this to exit code 2.
    """


class InternalCheckError(ConeinvError):
    """An internal consistency check failed; indicates a bug, never bad input.

    The CLI maps this to exit code 3.
    """


class FactorBudgetError(ConeinvError):
    """The exact factorization subroutine exceeded its size budget."""
