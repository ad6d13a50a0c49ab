"""Source positions and diagnostics shared by every compiler phase.

Diagnostic codes are stable identifiers: P0xx for parse-time problems,
S0xx for semantic ones. Tools matching on codes can rely on them not
being renumbered.
"""

from __future__ import annotations

import json
from dataclasses import dataclass


@dataclass(frozen=True)
class SourceSpan:
    """A half-open-feeling but inclusive character range, 1-based."""

    file: str
    start_line: int
    start_col: int
    end_line: int
    end_col: int

    def __post_init__(self) -> None:
        if self.start_line < 1 or self.start_col < 1 or self.end_line < 1 or self.end_col < 1:
            raise ValueError(f"span coordinates must be >= 1: {self}")
        if (self.end_line, self.end_col) < (self.start_line, self.start_col):
            raise ValueError(f"span end precedes start: {self}")

    def to(self, other: "SourceSpan") -> "SourceSpan":
        """Smallest span covering both self and other (same file)."""
        start = min((self.start_line, self.start_col), (other.start_line, other.start_col))
        end = max((self.end_line, self.end_col), (other.end_line, other.end_col))
        return SourceSpan(self.file, start[0], start[1], end[0], end[1])

    def __str__(self) -> str:
        return f"{self.file}:{self.start_line}:{self.start_col}"


# Parse family.
P_UNEXPECTED_TOKEN = "P001"
P_UNTERMINATED_BLOCK = "P002"
P_DUPLICATE_MEMBER = "P003"
P_DUPLICATE_STATE = "P004"
P_BAD_DECORATION = "P005"

# Semantic family.
S_UNRESOLVED_NAME = "S001"
S_BAD_VISIBILITY = "S002"
S_DUPLICATE_DEFINITION = "S003"
S_CYCLIC_MEMBER = "S005"
S_RESERVED_TARGET_NAME = "S006"
S_CYCLIC_OP_EXPR = "S007"
S_DELTA_NOT_STATE = "S010"
S_PRIMED_OUTSIDE_DELTA = "S011"
S_UNCONSTRAINED_OUTPUT = "S012"
S_NO_DEFINING_EQUALITY = "S020"
S_MULTIPLE_DEFINING_EQUALITIES = "S021"
S_BAD_INIT_PREDICATE = "S030"

ERROR = "error"
WARNING = "warning"


@dataclass(frozen=True)
class Diagnostic:
    code: str
    severity: str
    message: str
    span: SourceSpan

    def sort_key(self) -> tuple:
        s = self.span
        return (s.file, s.start_line, s.start_col, s.end_line, s.end_col, self.code)

    def to_json(self) -> str:
        """One-line JSON object per the machine-readable diagnostics schema."""
        return json.dumps(
            {
                "code": self.code,
                "severity": self.severity,
                "message": self.message,
                "file": self.span.file,
                "startLine": self.span.start_line,
                "startCol": self.span.start_col,
                "endLine": self.span.end_line,
                "endCol": self.span.end_col,
            }
        )

    def render(self) -> str:
        """Human-readable single-line rendering."""
        s = self.span
        return f"{s.file}:{s.start_line}:{s.start_col}: {self.severity} {self.code}: {self.message}"


def error(code: str, message: str, span: SourceSpan) -> Diagnostic:
    return Diagnostic(code, ERROR, message, span)


def warning(code: str, message: str, span: SourceSpan) -> Diagnostic:
    return Diagnostic(code, WARNING, message, span)


def sort_diagnostics(diags: list[Diagnostic]) -> list[Diagnostic]:
    """Deterministic ordering: by file, span, then code."""
    return sorted(diags, key=Diagnostic.sort_key)


def has_errors(diags: list[Diagnostic]) -> bool:
    return any(d.severity == ERROR for d in diags)
