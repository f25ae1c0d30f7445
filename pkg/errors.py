"""
errors.py — Exception hierarchy for arboru.

Predicates return booleans or None and never raise; these exceptions mark
bad input or an operation called outside its preconditions.
"""

from typing import Optional


class ArboruError(Exception):
    """Base class for every error raised by the toolkit."""


class DegreeError(ArboruError, ValueError):
    """Degree out of range, mismatched degrees, or a color outside {1..d}."""


class ParseError(ArboruError, ValueError):
    """Unparseable text, with the location of the offending token."""

    def __init__(self, message: str, line: int = 1, column: int = 1, source: Optional[str] = None):
        self.message = message
        self.line = line
        self.column = column
        self.source = source
        super().__init__(str(self))

    def shifted(self, line: int, column_offset: int = 0) -> "ParseError":
        """Same error relocated into a larger document."""
        return ParseError(self.message, line, self.column + column_offset, self.source)

    def __str__(self) -> str:
        where = f"{self.source}:" if self.source else ""
        return f"{where}{self.line}:{self.column}: {self.message}"


class PreconditionError(ArboruError):
    """An operation was called on input outside its domain."""


class HypothesisError(PreconditionError):
    """F is not transitive and generated by its point stabilizers."""


class ConfigError(ArboruError):
    """Malformed suite configuration."""
