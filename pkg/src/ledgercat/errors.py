"""Exception hierarchy shared by every ledgercat module."""

from __future__ import annotations


class LedgercatError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(LedgercatError):
    """Malformed theory, term or ledger source.

    ``line`` and ``column`` are 1-based and may be ``None`` when the
    position is not known.
    """

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(self._render())

    def _render(self) -> str:
        if self.line is None:
            return self.message
        if self.column is None:
            return f"line {self.line}: {self.message}"
        return f"line {self.line}, column {self.column}: {self.message}"


class TheoryError(ParseError):
    """A theory is syntactically fine but fails validation (unknown or duplicate names)."""


class TypingError(LedgercatError):
    """A term does not typecheck."""


class NotParallelError(LedgercatError):
    """Two morphisms were compared but do not share domain and codomain."""


class LedgerError(LedgercatError):
    """Invalid ledger operation, stale transaction or corrupted ledger file."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")


class ResourceLimitError(LedgercatError):
    """An exhaustive search exceeded its configured cap."""
