"""Shared exception types for parsers, simulators and graders."""

from __future__ import annotations


class FormalGradeError(Exception):
    """Base class for all library errors."""


class ParseError(FormalGradeError):
    """Malformed concrete syntax. Columns and lines are 1-based."""

    def __init__(self, message: str, line: int = 1, column: int = 1, expected: str | None = None):
        self.line = line
        self.column = column
        self.expected = expected
        suffix = f" (expected {expected})" if expected else ""
        super().__init__(f"{message} at line {line}, column {column}{suffix}")


class AlphabetError(FormalGradeError):
    """A symbol outside the declared alphabet."""


class EmptyLanguageError(FormalGradeError):
    """The grammar's start symbol derives no terminal word."""


class NotCnfError(FormalGradeError):
    """An operation requiring Chomsky normal form got a grammar that is not in it."""


class DuplicateProductionWarning(UserWarning):
    """Exact duplicate productions in a grammar source; duplicates are dropped."""


class NotASubexpression(FormalGradeError):
    """A block label that is not a subexpression of the goal regular expression."""


class IllegalMove(FormalGradeError):
    """A game move that violates the rules of the current phase."""

    def __init__(self, reason: str):
        self.reason = reason
        super().__init__(reason)


class InvalidAttempt(FormalGradeError):
    """An attempt document that cannot be graded (wrong shape, unparseable)."""


class InvalidProblem(FormalGradeError):
    """A problem payload that fails its kind-specific validation."""


class BudgetTooSmall(FormalGradeError):
    """A time budget too small to decide even words of length one."""


class TmEncodingError(FormalGradeError):
    """A halted Turing machine tape whose decoded span is not unary."""


class ArityMismatch(FormalGradeError):
    """Program variable count and machine tape count differ."""


class NoCandidateInBand(FormalGradeError):
    """No generated candidate had positive quality inside the difficulty band."""

    def __init__(self, kind: str, d_min: int, d_max: int, seed: int):
        self.kind = kind
        self.d_min = d_min
        self.d_max = d_max
        self.seed = seed
        super().__init__(f"no {kind} candidate with difficulty in [{d_min}, {d_max}] for seed {seed}")
