"""Exception hierarchy shared by every hyperkb subsystem."""

from __future__ import annotations


class HyperKbError(Exception):
    """Base class for all library errors."""


class ParseError(HyperKbError):
    """Malformed input text. Carries a 1-based line/column when known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.message = message
        self.line = line
        self.column = column
        where = f" at line {line}, column {column}" if line is not None else ""
        super().__init__(f"{message}{where}")

    def position(self) -> dict:
        return {"line": self.line, "column": self.column}


class VocabularyError(ParseError):
    """Undeclared name, or a name declared in more than one vocabulary set."""


class UnmappedNameError(HyperKbError, KeyError):
    """An interpretation does not cover a name it is asked to interpret."""

    def __str__(self) -> str:
        return Exception.__str__(self)


class InterpretationError(HyperKbError, ValueError):
    """An interpretation violates its structural invariants."""


class BudgetExceeded(HyperKbError):
    """A bounded search would exceed its enumeration budget."""

    def __init__(self, message: str, needed: int | None = None, budget: int | None = None):
        self.needed = needed
        self.budget = budget
        super().__init__(message)


class TermPositionError(HyperKbError, ValueError):
    """An RDF term in a position RDF forbids (e.g. a literal subject)."""


class HslError(ParseError):
    """Malformed or referentially inconsistent HSL document."""


class DuplicateIdError(HyperKbError):
    pass


class UnknownIdError(HyperKbError, KeyError):
    def __str__(self) -> str:
        return Exception.__str__(self)


class IntegrityError(HyperKbError):
    """An operation would leave the Hyperknowledge base with dangling references."""


class QueryError(HyperKbError):
    """A query is well-formed but cannot be evaluated against the given data."""


class JournalCorruptError(HyperKbError):
    def __init__(self, message: str, last_good_seq: int):
        self.last_good_seq = last_good_seq
        super().__init__(f"{message} (last good sequence number: {last_good_seq})")
