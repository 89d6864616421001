"""Deterministic N3 output for formulas."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Set, Tuple

from .model import (
    LOG_IMPLIES,
    OWL_SAMEAS,
    RDF_TYPE,
    XSD_BOOLEAN,
    XSD_DECIMAL,
    XSD_DOUBLE,
    XSD_INTEGER,
    Blank,
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

_NUMBER_FORMS = {
    XSD_INTEGER: re.compile(r"[+-]?\d+"),
    XSD_DECIMAL: re.compile(r"[+-]?\d+\.\d+"),
    XSD_DOUBLE: re.compile(r"[+-]?\d+(\.\d+)?[eE][+-]?\d+"),
}
_LOCAL = re.compile(r"([^\W]|[-_])*", re.UNICODE)
_PREFIX = re.compile(r"([A-Za-z][\w-]*)?")
_VAR_NAME = re.compile(r"[^\W\d][\w-]*", re.UNICODE)
_SUGAR_VERBS = {RDF_TYPE: "a", OWL_SAMEAS: "=", LOG_IMPLIES: "=>"}


@dataclass
class SerializerConfig:
    prefixes: Mapping[str, str] = field(default_factory=dict)
    sugar: bool = True
    sort_triples: bool = True
    base: Optional[str] = None
    flat: bool = False


def escape_string(s: str) -> str:
    out = []
    for ch in s:
        if ch == "\\":
            out.append("\\\\")
        elif ch == '"':
            out.append('\\"')
        elif ch == "\n":
            out.append("\\n")
        elif ch == "\r":
            out.append("\\r")
        elif ch == "\t":
            out.append("\\t")
        elif ord(ch) < 0x20 or ch in "  \x7f":
            out.append(f"\\u{ord(ch):04X}")
        else:
            out.append(ch)
    return "".join(out)


def _walk_formulas(f: Formula, depth: int = 0):
    """Yield (formula, depth) for f and every formula quoted inside it."""
    yield f, depth
    for triple in f.triples:
        for t in triple:
            yield from _nested(t, depth)


def _nested(t: Term, depth: int):
    if isinstance(t, Quoted):
        yield from _walk_formulas(t.formula, depth + 1)
    elif isinstance(t, ListTerm):
        for item in t.items:
            yield from _nested(item, depth)


def _direct_terms(t: Term):
    """t and the terms inside its lists, not descending into formulas."""
    yield t
    if isinstance(t, ListTerm):
        for item in t.items:
            yield from _direct_terms(item)


def _explicit_universals(f: Formula) -> Dict[int, List[str]]:
    """Universals the ``?x`` shorthand would re-scope differently on reparse.

    Keys are ``id()`` of the declaring formula.
    """
    out: Dict[int, List[str]] = {}
    top = f

    def depths(g: Formula, name: str, depth: int, acc: Set[int]) -> None:
        for triple in g.triples:
            for t in triple:
                for sub in _direct_terms(t):
                    if isinstance(sub, UniVar) and sub.name == name:
                        acc.add(depth)
                    elif isinstance(sub, Quoted):
                        depths(sub.formula, name, depth + 1, acc)

    for g, _ in _walk_formulas(f):
        for name in sorted(g.universals):
            acc: Set[int] = set()
            depths(g, name, 0, acc)
            if not acc:
                continue
            ok = acc <= {0, 1} if g is top else acc == {1}
            if not ok:
                out.setdefault(id(g), []).append(name)
    return out


class _Writer:
    def __init__(self, root: Formula, cfg: SerializerConfig, inline: bool = True, keep_labels: bool = False):
        self.cfg = cfg
        self.sugar = cfg.sugar and not cfg.flat
        self.used_prefixes: Set[str] = set()
        self.labels: Dict[Term, str] = {}
        self.keep_labels = keep_labels
        self.var_names: Dict[str, str] = {}
        self.explicit = _explicit_universals(root)
        self.inline: Set[Blank] = self._inline_blanks(root) if (inline and self.sugar) else set()
        self.ns = sorted(
            ((ns, p) for p, ns in cfg.prefixes.items() if _PREFIX.fullmatch(p)),
            key=lambda x: (-len(x[0]), x[1]),
        )

    # -- blank inlining analysis -------------------------------------------------

    def _inline_blanks(self, root: Formula) -> Set[Blank]:
        home: Dict[Blank, int] = {}
        as_object: Dict[Blank, int] = {}
        parent: Dict[Blank, Term] = {}
        bad: Set[Blank] = set()
        for g, _ in _walk_formulas(root):
            for s, p, o in g.triples:
                for pos, t in enumerate((s, p, o)):
                    for sub in _direct_terms(t):
                        if not isinstance(sub, Blank):
                            continue
                        if home.setdefault(sub, id(g)) != id(g):
                            bad.add(sub)
                        if sub is not t or pos == 1:
                            bad.add(sub)
                        elif pos == 2:
                            as_object[sub] = as_object.get(sub, 0) + 1
                            parent[sub] = s
        cands = {b for b, n in as_object.items() if n == 1 and b not in bad}
        out = set()
        for b in cands:
            seen = {b}
            cur = parent[b]
            while isinstance(cur, Blank) and cur in cands:
                if cur in seen:
                    break
                seen.add(cur)
                cur = parent[cur]
            else:
                out.add(b)
        return out

    # -- terms ------------------------------------------------------------------------

    def iri(self, value: str) -> str:
        if not self.cfg.flat:
            if self.cfg.base is not None and value == self.cfg.base:
                return "<>"
            for ns, prefix in self.ns:
                if value.startswith(ns):
                    local = value[len(ns):]
                    if _LOCAL.fullmatch(local) and not local.startswith("-") and (self.sugar or local):
                        self.used_prefixes.add(prefix)
                        return f"{prefix}:{local}"
        return "<" + value.replace("\\", "\\u005C").replace(">", "\\u003E") + ">"

    def literal(self, t: Literal) -> str:
        if self.sugar and t.datatype in _NUMBER_FORMS and _NUMBER_FORMS[t.datatype].fullmatch(t.lexical):
            return t.lexical
        if self.sugar and t.datatype == XSD_BOOLEAN and t.lexical in ("true", "false"):
            return "@" + t.lexical
        body = '"' + escape_string(t.lexical) + '"'
        if t.language:
            return f"{body}@{t.language}"
        if t.datatype:
            return f"{body}^^{self.iri(t.datatype)}"
        return body

    def label(self, t: Term) -> str:
        name = self.labels.get(t)
        if name is None:
            if self.keep_labels and isinstance(t, Blank):
                name = t.id
            else:
                name = f"b{len(self.labels) + 1}"
            self.labels[t] = name
        return "_:" + name

    def var(self, t: UniVar) -> str:
        name = self.var_names.get(t.name)
        if name is None:
            if _VAR_NAME.fullmatch(t.name):
                name = t.name
            else:
                stem = re.sub(r"\W", "_", t.name) or "v"
                if not stem[0].isalpha():
                    stem = "v" + stem
                name, n = stem, 1
                taken = set(self.var_names.values())
                while name in taken:
                    name = f"{stem}{n}"
                    n += 1
            self.var_names[t.name] = name
        return "?" + name

    def term(self, t: Term, depth: int) -> str:
        kind = type(t)
        if kind is Iri:
            return self.iri(t.value)
        if kind is Literal:
            return self.literal(t)
        if kind is UniVar:
            return self.var(t)
        if kind is Blank and t in self.inline:
            return self.blank_body(t, depth)
        if kind is Blank or kind is ExiVar:
            return self.label(t)
        if kind is ListTerm:
            if not t.items:
                return "()"
            return "( " + " ".join(self.term(i, depth) for i in t.items) + " )"
        if kind is Quoted:
            body = self.formula_body(t.formula, depth + 1)
            return "{ " + body + " }" if body else "{ }"
        raise TypeError(f"cannot serialize {t!r}")

    def blank_body(self, b: Blank, depth: int) -> str:
        triples = self.by_subject.get(b, [])
        if not triples:
            return "[ ]"
        return "[ " + self.predicate_list(triples, depth, nested=True) + " ]"

    def verb(self, p: Term, depth: int) -> str:
        if self.sugar and p in _SUGAR_VERBS:
            return _SUGAR_VERBS[p]
        return self.term(p, depth)

    def predicate_list(self, triples: List[Triple], depth: int, nested: bool) -> str:
        if not self.sugar:
            return "; ".join(f"{self.verb(p, depth)} {self.term(o, depth)}" for _, p, o in triples)
        groups: List[Tuple[Term, List[Term]]] = []
        for _, p, o in triples:
            if groups and groups[-1][0] == p:
                groups[-1][1].append(o)
            else:
                groups.append((p, [o]))
        parts = [
            self.verb(p, depth) + " " + ", ".join(self.term(o, depth) for o in objs)
            for p, objs in groups
        ]
        sep = "; " if nested or depth > 0 else ";\n    "
        return sep.join(parts)

    # -- formulas ------------------------------------------------------------------

    def ordered(self, f: Formula) -> List[Triple]:
        return list(f.sorted_triples()) if self.cfg.sort_triples else list(f.triples)

    def statements(self, f: Formula, depth: int) -> List[str]:
        out = []
        for name in self.explicit.get(id(f), []):
            out.append("@forAll " + self.var(UniVar(name)))
        triples = self.ordered(f)
        if self.sugar:
            self.by_subject = getattr(self, "by_subject", {})
            for t in triples:
                if t[0] in self.inline:
                    self.by_subject.setdefault(t[0], []).append(t)
            rest = [t for t in triples if t[0] not in self.inline]
            i = 0
            while i < len(rest):
                j = i
                while j < len(rest) and rest[j][0] == rest[i][0]:
                    j += 1
                subj = self.term(rest[i][0], depth)
                out.append(f"{subj} {self.predicate_list(rest[i:j], depth, nested=False)}")
                i = j
        else:
            for s, p, o in triples:
                out.append(f"{self.term(s, depth)} {self.verb(p, depth)} {self.term(o, depth)}")
        return out

    def formula_body(self, f: Formula, depth: int) -> str:
        return " . ".join(self.statements(f, depth))

    def document(self, f: Formula) -> str:
        lines = [s + " ." for s in self.statements(f, 0)]
        body = "\n".join(lines)
        if not body:
            return ""
        header = [
            f"@prefix {p}: <{self.cfg.prefixes[p]}> ." for p in sorted(self.used_prefixes)
        ]
        if header:
            return "\n".join(header) + "\n\n" + body + "\n"
        return body + "\n"


def serialize(f: Formula, cfg: Optional[SerializerConfig] = None) -> str:
    """N3 text for ``f`` that parses back to an isomorphic formula."""
    return _Writer(f, cfg or SerializerConfig()).document(f)


def serialize_flat(f: Formula) -> str:
    """One triple per line, absolute IRIs, no abbreviations."""
    return serialize(f, SerializerConfig(flat=True, sugar=False))


def canonical_text(f: Formula, prefixes: Optional[Mapping[str, str]] = None) -> str:
    """Byte-stable text for the isomorphism class of ``f``.

    Variables and blank nodes are renamed by the canonical ordering, then
    printed one statement per line in sorted order, without blank-node
    brackets.
    """
    from .canon import canonical_formula

    g = canonical_formula(f)
    cfg = SerializerConfig(prefixes=dict(prefixes or {}), sugar=True)
    w = _Writer(g, cfg, inline=False, keep_labels=True)
    lines = [s + " ." for s in w.statements(g, 0)]
    if not lines:
        return ""
    header = [f"@prefix {p}: <{cfg.prefixes[p]}> ." for p in sorted(w.used_prefixes)]
    return "\n".join(header + lines) + "\n"
