"""Recursive-descent parser for N3 documents."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Set, Tuple
from urllib.parse import urljoin

from .errors import ParseError
from .lexer import Lexer, Token
from .model import (
    LOG_IMPLIES,
    OWL_SAMEAS,
    RDF_TYPE,
    XSD_BOOLEAN,
    XSD_DECIMAL,
    XSD_DOUBLE,
    XSD_INTEGER,
    Blank,
    BlankFactory,
    ExiVar,
    Formula,
    Iri,
    ListTerm,
    Literal,
    Quoted,
    Term,
    Triple,
    UniVar,
)

_NUMERIC = {"integer": XSD_INTEGER, "decimal": XSD_DECIMAL, "double": XSD_DOUBLE}


@dataclass
class _Frame:
    triples: List[Triple] = field(default_factory=list)
    universals: List[str] = field(default_factory=list)
    existentials: List[str] = field(default_factory=list)
    # IRIs declared by @forAll/@forSome in this formula, mapped to their variable.
    declared: Dict[str, Term] = field(default_factory=dict)


@dataclass
class ParserState:
    prefixes: Dict[str, str] = field(default_factory=dict)
    base: Optional[str] = None
    keywords: Optional[Set[str]] = None


def resolve_qname(state: ParserState, qname: str) -> Iri:
    """Expand ``prefix:local`` (or a bare name in the default namespace)."""
    prefix, sep, local = qname.partition(":")
    if not sep:
        prefix, local = "", qname
    ns = _namespace(state, prefix)
    if ns is None:
        raise ParseError(f"undeclared prefix {prefix!r}:")
    return Iri(ns + local)


def _namespace(state: ParserState, prefix: str) -> Optional[str]:
    ns = state.prefixes.get(prefix)
    if ns is None and prefix == "" and state.base is not None:
        ns = state.base.split("#", 1)[0] + "#"
    return ns


def resolve_iri(ref: str, base: Optional[str]) -> str:
    if _is_absolute(ref):
        return ref
    if base is None:
        raise ValueError(f"relative IRI <{ref}> with no base")
    return urljoin(base, ref) if ref else base.split("#", 1)[0]


def _is_absolute(ref: str) -> bool:
    head, sep, _ = ref.partition(":")
    return bool(sep) and bool(head) and head[0].isalpha() and all(
        c.isalnum() or c in "+-." for c in head
    )


class Parser:
    def __init__(self, text: str, base: Optional[str] = None, source: Optional[str] = None):
        self.source = source or base or "<input>"
        self.lexer = Lexer(text, self.source)
        self.toks = self.lexer.tokens()
        self.i = 0
        self.state = ParserState(base=base)
        self.frames: List[_Frame] = []
        self.doc_blanks: Dict[str, Blank] = {}
        self.blank = BlankFactory()
        self.var_names: Dict[str, str] = {}

    # -- token helpers ------------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def advance(self) -> Token:
        tok = self.toks[self.i]
        if tok.kind != "eof":
            self.i += 1
        return tok

    def error(self, message: str, tok: Optional[Token] = None) -> ParseError:
        tok = tok or self.tok
        return ParseError(message, tok.span, self.source)

    def is_punct(self, value: str, tok: Optional[Token] = None) -> bool:
        tok = tok or self.tok
        return tok.kind == "punct" and tok.value == value

    def expect(self, value: str) -> Token:
        if not self.is_punct(value):
            found = "end of input" if self.tok.kind == "eof" else repr(self.tok.text)
            raise self.error(f"expected {value!r}, found {found}")
        return self.advance()

    def keyword(self, tok: Optional[Token] = None) -> Optional[str]:
        """The keyword a token stands for under the active keyword mode."""
        tok = tok or self.tok
        kws = self.state.keywords
        if tok.kind == "keyword":
            if tok.text.startswith("@") or kws is None or tok.value in kws:
                return tok.value
            return None
        if tok.kind == "qname" and tok.value[0] is None and kws is not None and tok.value[1] in kws:
            return tok.value[1]
        return None

    # -- documents ------------------------------------------------------------

    def parse(self) -> Formula:
        self.frames.append(_Frame())
        self.statements(end=None)
        if self.tok.kind != "eof":
            raise self.error(f"unexpected {self.tok.text!r}")
        return self.finish(self.frames.pop())

    def finish(self, frame: _Frame) -> Formula:
        try:
            return Formula(frame.triples, frame.universals, frame.existentials)
        except ValueError as exc:
            raise self.error(str(exc)) from None

    def at_end(self, end: Optional[str]) -> bool:
        if end is None:
            return self.tok.kind == "eof"
        return self.is_punct(end) or self.tok.kind == "eof"

    def statements(self, end: Optional[str]) -> None:
        while not self.at_end(end):
            if self.is_punct("."):
                self.advance()
                continue
            self.statement()
            if self.is_punct("."):
                self.advance()
            elif not self.at_end(end):
                raise self.error(f"expected '.', found {self.tok.text!r}")

    def statement(self) -> None:
        kw = self.keyword()
        if kw is not None and self.tok.text.startswith("@"):
            directive = getattr(self, "directive_" + kw.lower(), None)
            if directive is not None:
                self.advance()
                directive()
                return
        subject = self.term()
        self.property_list(subject)

    def directive_prefix(self) -> None:
        tok = self.advance()
        if tok.kind != "qname" or tok.value[0] is None or tok.value[1]:
            raise self.error("expected 'prefix:' after @prefix", tok)
        iri = self.advance()
        if iri.kind != "iri":
            raise self.error("expected <namespace> in @prefix", iri)
        self.state.prefixes[tok.value[0]] = self.absolute(iri.value, iri)

    def directive_base(self) -> None:
        iri = self.advance()
        if iri.kind != "iri":
            raise self.error("expected <iri> after @base", iri)
        self.state.base = self.absolute(iri.value, iri)

    def directive_keywords(self) -> None:
        names: Set[str] = set()
        while self.tok.kind in ("keyword", "qname") and not self.tok.text.startswith("@"):
            tok = self.advance()
            if tok.kind == "qname" and tok.value[0] is not None:
                raise self.error("keywords must be bare names", tok)
            names.add(tok.value if tok.kind == "keyword" else tok.value[1])
            if not self.is_punct(","):
                break
            self.advance()
        self.state.keywords = names

    def directive_forall(self) -> None:
        self.declare(universal=True)

    def directive_forsome(self) -> None:
        self.declare(universal=False)

    def declare(self, universal: bool) -> None:
        frame = self.frames[-1]
        while True:
            tok = self.advance()
            if tok.kind == "var":
                iri, local = "?" + tok.value, tok.value
            elif tok.kind == "iri":
                iri = self.absolute(tok.value, tok)
                local = iri.rstrip("/#").rsplit("#", 1)[-1].rsplit("/", 1)[-1] or "v"
            elif tok.kind in ("qname", "keyword"):
                iri = self.qname_iri(tok).value
                local = tok.value[1] if tok.kind == "qname" else tok.value
                local = local or "v"
            else:
                raise self.error("expected a name to quantify", tok)
            name = self.var_name(iri, local)
            if universal:
                if name not in frame.universals:
                    frame.universals.append(name)
                frame.declared[iri] = UniVar(name)
            else:
                if name not in frame.existentials:
                    frame.existentials.append(name)
                frame.declared[iri] = ExiVar(name)
            if not self.is_punct(","):
                return
            self.advance()

    def var_name(self, iri: str, local: str) -> str:
        name = self.var_names.get(iri)
        if name is not None:
            return name
        taken = set(self.var_names.values())
        name, n = local, 1
        while name in taken:
            name = f"{local}{n}"
            n += 1
        self.var_names[iri] = name
        return name

    # -- statements -------------------------------------------------------------

    def property_list(self, subject: Term) -> None:
        while True:
            if self.tok.kind == "eof" or (self.tok.kind == "punct" and self.tok.value in ".}]"):
                return
            pred, reverse = self.verb()
            while True:
                obj = self.term()
                s, o = (obj, subject) if reverse else (subject, obj)
                self.emit(s, pred, o)
                if not self.is_punct(","):
                    break
                self.advance()
            if not self.is_punct(";"):
                return
            while self.is_punct(";"):
                self.advance()

    def emit(self, s: Term, p: Term, o: Term) -> None:
        if isinstance(p, ListTerm):
            raise self.error("a list cannot be used as a predicate")
        self.frames[-1].triples.append(Triple(s, p, o))

    def verb(self) -> Tuple[Term, bool]:
        tok = self.tok
        kw = self.keyword()
        if tok.kind == "op":
            self.advance()
            if tok.value == "=":
                return OWL_SAMEAS, False
            if tok.value == "=>":
                return LOG_IMPLIES, False
            return LOG_IMPLIES, True
        if kw == "a":
            self.advance()
            return RDF_TYPE, False
        if kw == "has":
            self.advance()
            return self.term(), False
        if kw == "is":
            self.advance()
            pred = self.term()
            if self.keyword() != "of":
                raise self.error("expected 'of' after 'is <property>'")
            self.advance()
            return pred, True
        return self.term(), False

    # -- terms --------------------------------------------------------------------

    def term(self) -> Term:
        tok = self.tok
        kind = tok.kind
        kw = self.keyword()
        if kw is not None:
            if kw in ("true", "false"):
                self.advance()
                return Literal(kw, XSD_BOOLEAN)
            if kw == "a" and tok.text.startswith("@"):
                self.advance()
                return RDF_TYPE
            raise self.error(f"unexpected keyword {tok.text!r}")
        if kind == "iri":
            self.advance()
            return self.lookup_declared(self.absolute(tok.value, tok))
        if kind in ("qname", "keyword"):
            self.advance()
            return self.lookup_declared(self.qname_iri(tok).value)
        if kind == "var":
            self.advance()
            return self.question_var(tok)
        if kind == "bnode":
            self.advance()
            blank = self.doc_blanks.get(tok.value)
            if blank is None:
                blank = self.doc_blanks[tok.value] = self.blank()
            return blank
        if kind == "string":
            return self.literal()
        if kind in _NUMERIC:
            self.advance()
            return Literal(tok.text, _NUMERIC[kind])
        if kind == "punct":
            if tok.value == "[":
                self.advance()
                node = self.blank()
                self.property_list(node)
                self.expect("]")
                return node
            if tok.value == "(":
                self.advance()
                items = []
                while not self.is_punct(")"):
                    if self.tok.kind == "eof":
                        raise self.error("unterminated list", tok)
                    items.append(self.term())
                self.advance()
                return ListTerm(tuple(items))
            if tok.value == "{":
                self.advance()
                self.frames.append(_Frame())
                self.statements(end="}")
                if not self.is_punct("}"):
                    raise self.error("unterminated formula", tok)
                self.advance()
                return Quoted(self.finish(self.frames.pop()))
        found = "end of input" if kind == "eof" else repr(tok.text)
        raise self.error(f"expected a term, found {found}")

    def literal(self) -> Literal:
        tok = self.advance()
        if self.tok.kind == "langtag":
            return Literal(tok.value, language=self.advance().value.lower())
        if self.is_punct("^^"):
            self.advance()
            dt = self.term()
            if not isinstance(dt, Iri):
                raise self.error("datatype must be an IRI")
            return Literal(tok.value, dt.value)
        return Literal(tok.value)

    def absolute(self, ref: str, tok: Token) -> str:
        try:
            return resolve_iri(ref, self.state.base)
        except ValueError as exc:
            raise self.error(str(exc), tok) from None

    def qname_iri(self, tok: Token) -> Iri:
        if tok.kind == "keyword":
            prefix, local = "", tok.value
        else:
            prefix, local = tok.value
            prefix = prefix or ""
        ns = _namespace(self.state, prefix)
        if ns is None:
            if prefix:
                raise self.error(f"undeclared prefix {prefix!r}:", tok)
            raise self.error("no default namespace: declare '@prefix : <...>' or give a base", tok)
        return Iri(ns + local)

    def lookup_declared(self, iri: str) -> Term:
        for frame in reversed(self.frames):
            var = frame.declared.get(iri)
            if var is not None:
                return var
        return Iri(iri)

    def question_var(self, tok: Token) -> UniVar:
        key = "?" + tok.value
        for frame in reversed(self.frames):
            var = frame.declared.get(key)
            if var is not None:
                if not isinstance(var, UniVar):
                    raise self.error(f"?{tok.value} clashes with an existential", tok)
                return var
        # Quantified in the parent of the formula where it first appears.
        frame = self.frames[-2] if len(self.frames) > 1 else self.frames[-1]
        name = self.var_name(key, tok.value)
        frame.universals.append(name)
        var = frame.declared[key] = UniVar(name)
        return var


def parse_with_state(
    text: str, base: Optional[str] = None, source: Optional[str] = None
) -> Tuple[Formula, ParserState]:
    parser = Parser(text, base, source)
    return parser.parse(), parser.state


def parse_document(text: str, base: Optional[str] = None, source: Optional[str] = None) -> Formula:
    """Parse N3 text into its top-level formula."""
    return parse_with_state(text, base, source)[0]
