"""Errors raised by the neartri library."""


class NearTriError(Exception):
    """Base class for every error the library raises on purpose."""


class NtgSyntaxError(NearTriError, ValueError):
    def __init__(self, message, line, column=1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class InvalidEmbedding(NearTriError, ValueError):
    """The rotation system and boundary do not describe a near-triangulation."""

    def __init__(self, invariant, message):
        super().__init__(f"{invariant}: {message}")
        self.invariant = invariant


class SurgeryError(NearTriError, ValueError):
    pass


class DecompositionError(NearTriError, ValueError):
    pass


class CanonicalFormTooLarge(NearTriError, ValueError):
    pass


class SearchBudgetExceeded(NearTriError):
    """The exact search gave up; it never returns a wrong answer instead."""


class ExceptionalInput(NearTriError):
    """The graph is one of the two 12-vertex MOPs with total domination number 5."""


class LedgerBreach(NearTriError, AssertionError):
    """A reduction step spent more than its budget or lost domination."""


class GeneratorError(NearTriError, ValueError):
    pass


class NotApplicable(NearTriError, ValueError):
    """The requested method does not apply to this instance (for example n < 5)."""
