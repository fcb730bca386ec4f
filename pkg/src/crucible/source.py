"""Source positions for parser diagnostics."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Span:
    """Location of a construct inside the source text (1-based line/column)."""

    line: int
    column: int
    length: int = 0

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"


DUMMY_SPAN = Span(0, 0, 0)
