"""Exception hierarchy shared by the parser, engine, and web access layer."""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Optional

if TYPE_CHECKING:
    from .model import Formula


@dataclass(frozen=True)
class SourceSpan:
    start: int
    end: int
    line: int
    column: int

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"


class N3Error(Exception):
    pass


class ParseError(N3Error):
    def __init__(self, message: str, span: Optional[SourceSpan] = None, source: str = "<input>"):
        self.message = message
        self.span = span
        self.source = source
        super().__init__(self.diagnostic())

    def diagnostic(self) -> str:
        if self.span is None:
            return f"{self.source}: {self.message}"
        return f"{self.source}:{self.span.line}:{self.span.column}: {self.message}"


class LexicalError(ParseError):
    pass


class ClosureLimitError(N3Error):
    """Raised when a fixpoint computation hits an EngineLimits cap.

    ``partial`` holds everything derived before the limit was reached.
    """

    def __init__(self, message: str, partial: "Formula"):
        self.partial = partial
        super().__init__(message)


class WebAccessError(N3Error):
    def __init__(self, message: str, iri: str):
        self.iri = iri
        super().__init__(f"{iri}: {message}")


class OfflineError(WebAccessError):
    pass


class FetchError(WebAccessError):
    def __init__(self, message: str, iri: str, status: Optional[int] = None):
        self.status = status
        super().__init__(message, iri)


class FetchTimeout(WebAccessError):
    pass


class SemanticsError(WebAccessError):
    def __init__(self, message: str, iri: str, span: Optional[SourceSpan] = None):
        self.span = span
        super().__init__(message, iri)
