"""Tokenizer for the N3 concrete syntax."""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from typing import List, Optional

from .errors import LexicalError, SourceSpan

PUNCT = set("{}[]();,.")
DEFAULT_BARE_KEYWORDS = frozenset({"a", "is", "of"})

_ESCAPES = {
    '"': '"', "'": "'", "\\": "\\", "n": "\n", "t": "\t", "r": "\r", "b": "\b", "f": "\f",
}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    value: object
    span: SourceSpan

    def __repr__(self) -> str:
        return f"Token({self.kind}, {self.text!r})"


def _name_start(ch: str) -> bool:
    return ch.isalpha() or ch == "_" or ord(ch) > 127


def _name_char(ch: str) -> bool:
    return ch.isalnum() or ch in "_-" or ord(ch) > 127


class Lexer:
    def __init__(self, text: str, source: str = "<input>"):
        self.text = text
        self.source = source
        self.pos = 0
        self._lines = [i for i, ch in enumerate(text) if ch == "\n"]

    def span(self, start: int, end: int) -> SourceSpan:
        line = bisect.bisect_left(self._lines, start)
        line_start = self._lines[line - 1] + 1 if line > 0 else 0
        return SourceSpan(start, end, line + 1, start - line_start + 1)

    def error(self, message: str, start: int) -> LexicalError:
        return LexicalError(message, self.span(start, max(start, self.pos)), self.source)

    def tokens(self) -> List[Token]:
        out: List[Token] = []
        while True:
            tok = self._next(out[-1] if out else None)
            out.append(tok)
            if tok.kind == "eof":
                return out

    def _skip(self) -> None:
        text = self.text
        n = len(text)
        while self.pos < n:
            ch = text[self.pos]
            if ch in " \t\r\n﻿":
                self.pos += 1
            elif ch == "#":
                end = text.find("\n", self.pos)
                self.pos = n if end < 0 else end + 1
            else:
                return

    def _tok(self, kind: str, start: int, value: object = None) -> Token:
        text = self.text[start:self.pos]
        return Token(kind, text, text if value is None else value, self.span(start, self.pos))

    def _next(self, prev: Optional[Token]) -> Token:
        before = self.pos
        self._skip()
        text = self.text
        start = self.pos
        if start >= len(text):
            return self._tok("eof", start, "")
        ch = text[start]
        nxt = text[start + 1] if start + 1 < len(text) else ""

        if ch == "<":
            if nxt == "=":
                self.pos += 2
                return self._tok("op", start, "<=")
            return self._iri(start)
        if ch == '"' or ch == "'":
            return self._string(start)
        if ch == "?" and nxt and _name_start(nxt):
            self.pos += 1
            self._name()
            return self._tok("var", start, text[start + 1:self.pos])
        if ch == "_" and nxt == ":":
            self.pos += 2
            self._local()
            return self._tok("bnode", start, text[start + 2:self.pos])
        if ch == "@":
            self.pos += 1
            if prev is not None and prev.kind == "string" and before == start:
                while self.pos < len(text) and (text[self.pos].isalnum() or text[self.pos] == "-"):
                    self.pos += 1
                if self.pos == start + 1:
                    raise self.error("empty language tag", start)
                return self._tok("langtag", start, text[start + 1:self.pos])
            if not (nxt and _name_start(nxt)):
                raise self.error("expected keyword after '@'", start)
            self._name()
            return self._tok("keyword", start, text[start + 1:self.pos])
        if ch.isdigit() or (ch in "+-." and nxt.isdigit()) or (ch in "+-" and text.startswith(".", start + 1)
                                                              and text[start + 2:start + 3].isdigit()):
            return self._number(start)
        if ch == "=":
            if nxt == ">":
                self.pos += 2
                return self._tok("op", start, "=>")
            self.pos += 1
            return self._tok("op", start, "=")
        if ch == "^" and nxt == "^":
            self.pos += 2
            return self._tok("punct", start, "^^")
        if ch in PUNCT:
            self.pos += 1
            return self._tok("punct", start, ch)
        if ch == ":" or _name_start(ch):
            return self._qname(start)
        raise self.error(f"unexpected character {ch!r}", start)

    def _name(self) -> None:
        text = self.text
        while self.pos < len(text) and _name_char(text[self.pos]):
            self.pos += 1

    def _local(self) -> None:
        text = self.text
        n = len(text)
        while self.pos < n:
            ch = text[self.pos]
            if _name_char(ch):
                self.pos += 1
            elif ch == "." and self.pos + 1 < n and _name_char(text[self.pos + 1]):
                self.pos += 1
            else:
                break

    def _qname(self, start: int) -> Token:
        text = self.text
        if text[start] != ":":
            self._name()
        if self.pos < len(text) and text[self.pos] == ":":
            prefix = text[start:self.pos]
            self.pos += 1
            local_start = self.pos
            self._local()
            return self._tok("qname", start, (prefix, text[local_start:self.pos]))
        name = text[start:self.pos]
        if name in DEFAULT_BARE_KEYWORDS:
            return self._tok("keyword", start, name)
        return self._tok("qname", start, (None, name))

    def _iri(self, start: int) -> Token:
        text = self.text
        self.pos = start + 1
        chars = []
        while True:
            if self.pos >= len(text):
                raise self.error("unterminated IRI", start)
            ch = text[self.pos]
            if ch == ">":
                self.pos += 1
                break
            if ch in " \t\r\n<\"{}|^`":
                raise self.error("unterminated IRI", start)
            if ch == "\\":
                chars.append(self._escape(start, iri=True))
                continue
            chars.append(ch)
            self.pos += 1
        return self._tok("iri", start, "".join(chars))

    def _escape(self, start: int, iri: bool = False) -> str:
        text = self.text
        if self.pos + 1 >= len(text):
            raise self.error("unterminated escape", start)
        code = text[self.pos + 1]
        if code in "uU":
            width = 4 if code == "u" else 8
            digits = text[self.pos + 2:self.pos + 2 + width]
            if len(digits) != width or any(c not in "0123456789abcdefABCDEF" for c in digits):
                raise self.error(f"bad \\{code} escape", self.pos)
            self.pos += 2 + width
            return chr(int(digits, 16))
        if iri or code not in _ESCAPES:
            raise self.error(f"unknown escape \\{code}", self.pos)
        self.pos += 2
        return _ESCAPES[code]

    def _string(self, start: int) -> Token:
        text = self.text
        q = text[start]
        triple = q * 3
        long = text.startswith(triple, start)
        self.pos = start + (3 if long else 1)
        chars = []
        while True:
            if self.pos >= len(text):
                raise self.error("unterminated string", start)
            ch = text[self.pos]
            if long and text.startswith(triple, self.pos):
                # Allow up to two quote marks right before the closing triple.
                while text.startswith(triple + q, self.pos):
                    chars.append(q)
                    self.pos += 1
                self.pos += 3
                break
            if not long and ch == q:
                self.pos += 1
                break
            if not long and ch == "\n":
                raise self.error("unterminated string", start)
            if ch == "\\":
                chars.append(self._escape(start))
                continue
            chars.append(ch)
            self.pos += 1
        return self._tok("string", start, "".join(chars))

    def _number(self, start: int) -> Token:
        text = self.text
        n = len(text)
        self.pos = start
        if text[self.pos] in "+-":
            self.pos += 1
        while self.pos < n and text[self.pos].isdigit():
            self.pos += 1
        kind = "integer"
        if self.pos + 1 < n and text[self.pos] == "." and text[self.pos + 1].isdigit():
            kind = "decimal"
            self.pos += 1
            while self.pos < n and text[self.pos].isdigit():
                self.pos += 1
        if self.pos < n and text[self.pos] in "eE":
            mark = self.pos
            self.pos += 1
            if self.pos < n and text[self.pos] in "+-":
                self.pos += 1
            if self.pos < n and text[self.pos].isdigit():
                while self.pos < n and text[self.pos].isdigit():
                    self.pos += 1
                kind = "double"
            else:
                self.pos = mark
        return self._tok(kind, start)


def tokenize(text: str, source: str = "<input>") -> List[Token]:
    """Tokens of ``text`` without the trailing end-of-input marker."""
    return Lexer(text, source).tokens()[:-1]
