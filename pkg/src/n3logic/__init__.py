"""Notation3 parsing, serialization and N3Logic reasoning."""

from .engine import EngineLimits, conclusion, filter, includes, not_includes, supports
from .errors import ClosureLimitError, N3Error, ParseError, WebAccessError
from .model import (
    Blank,
    ExiVar,
    Formula,
    Iri,
    ListTerm,
    Literal,
    Quoted,
    Triple,
    UniVar,
    conjoin,
    isomorphic,
    substitute_variables,
)
from .parser import parse_document
from .serializer import SerializerConfig, canonical_text, serialize

__version__ = "0.1.0"

__all__ = [
    "Blank",
    "ClosureLimitError",
    "EngineLimits",
    "ExiVar",
    "Formula",
    "Iri",
    "ListTerm",
    "Literal",
    "N3Error",
    "ParseError",
    "Quoted",
    "SerializerConfig",
    "Triple",
    "UniVar",
    "WebAccessError",
    "canonical_text",
    "conclusion",
    "conjoin",
    "filter",
    "includes",
    "isomorphic",
    "not_includes",
    "parse_document",
    "serialize",
    "substitute_variables",
    "supports",
]
