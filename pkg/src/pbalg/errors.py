"""Exception hierarchy shared by all pbalg modules."""

from __future__ import annotations


class PbalgError(Exception):
    """Base class for all pbalg errors."""


class StructuralError(PbalgError):
    """A table is malformed (wrong shape, index out of range, bad sentinel)."""


class DomainError(PbalgError):
    """An operation precondition is violated (e.g. a non-commeasurable pair)."""


class UndefinedOperationError(PbalgError):
    """A partial operation was read on a pair where it is undefined.

    Partial tables store a sentinel for undefined entries; reading one is a
    contract violation, never a silent default.
    """


class SearchCutoffError(PbalgError):
    """An exhaustive search exceeded its configured size cutoff."""

    def __init__(self, message: str, limit: int | None = None):
        super().__init__(message)
        self.limit = limit


class InvalidAlgebraError(PbalgError):
    """A construction produced a carrier that fails validation."""

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class AmalgamError(PbalgError):
    """Amalgamated colimit carrier is inconsistent (conflicting identifications)."""


class CoconeError(PbalgError):
    """A purported cocone is incoherent; carries the offending member pair."""

    def __init__(self, message: str, pair=None):
        super().__init__(message)
        self.pair = pair


class AmbiguousSpectrumError(PbalgError):
    """An eigenvalue sits inside the tolerance dead-zone around zero."""

    def __init__(self, message: str, gap: float | None = None):
        super().__init__(message)
        self.gap = gap


class FormatError(PbalgError):
    """Syntax error in an input file; carries a 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
