"""Exception hierarchy shared by all engine modules."""

from __future__ import annotations

from typing import TYPE_CHECKING, Any

from .source import Span

if TYPE_CHECKING:  # pragma: no cover
    from .guidance import GuidanceVerdict, PreRunReport


class CrucibleError(Exception):
    """Base class for every engine-raised error."""


class ModelSyntaxError(CrucibleError):
    """Malformed input text."""

    def __init__(self, span: Span, message: str):
        super().__init__(f"{span}: {message}")
        self.span = span
        self.message = message


class UnsupportedFeature(CrucibleError):
    """Valid Alloy, but outside the supported subset."""

    def __init__(self, span: Span, feature: str):
        super().__init__(f"{span}: unsupported feature: {feature}")
        self.span = span
        self.feature = feature


class UnknownName(CrucibleError):
    def __init__(self, name: str, span: Span | None = None):
        loc = f"{span}: " if span else ""
        super().__init__(f"{loc}unknown name '{name}'")
        self.name = name
        self.span = span


class DuplicateName(CrucibleError):
    def __init__(self, name: str, kind: str = "declaration"):
        super().__init__(f"duplicate {kind} name '{name}'")
        self.name = name
        self.kind = kind


class CyclicHierarchy(CrucibleError):
    def __init__(self, names: list[str]):
        super().__init__(f"cyclic signature hierarchy through {', '.join(names)}")
        self.names = names


class ArityError(CrucibleError):
    def __init__(self, message: str, span: Span | None = None):
        loc = f"{span}: " if span else ""
        super().__init__(loc + message)
        self.span = span


class NotFound(CrucibleError):
    """Lookup of a project, test, atom, connection, sig, field or pred failed."""

    def __init__(self, kind: str, key: str):
        super().__init__(f"no such {kind}: '{key}'")
        self.kind = kind
        self.key = key


class GuidanceViolation(CrucibleError):
    """A mutation was attempted that the guidance engine blocks."""

    def __init__(self, verdict: "GuidanceVerdict"):
        super().__init__(verdict.message)
        self.verdict = verdict


class ArityMismatch(CrucibleError):
    def __init__(self, relation: str, expected: int, got: int):
        super().__init__(
            f"relation '{relation}' has arity {expected}, got {got} atoms"
        )
        self.relation = relation
        self.expected = expected
        self.got = got


class BadArgs(CrucibleError):
    """Predicate expectation arguments do not match the predicate's parameters."""


class StructuralBlock(CrucibleError):
    """Test execution refused because the pre-run structural check failed."""

    def __init__(self, report: "PreRunReport"):
        super().__init__(
            "structural violations block this run: "
            + "; ".join(v.detail for v in report.violations)
        )
        self.report = report


class CorruptProject(CrucibleError):
    def __init__(self, detail: str, version: Any | None = None):
        super().__init__(f"corrupt project document: {detail}")
        self.detail = detail
        self.version = version


class IoError(CrucibleError):
    """Store directory could not be read or written."""


class UniverseTooLarge(CrucibleError):
    def __init__(self, total: int, limit: int):
        super().__init__(
            f"enumeration universe of {total} atoms exceeds the limit of {limit}"
        )
        self.total = total
        self.limit = limit
