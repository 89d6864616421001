"""Terms, triples and formulas, plus the structural operations on them.

All values are immutable once built. A ``Formula`` caches derived data
(indexes, canonical keys) lazily, which is safe because its triple set
never changes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Dict, FrozenSet, Iterable, Iterator, Mapping, Optional, Sequence, Set, Tuple, Union

RDF_NS = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS_NS = "http://www.w3.org/2000/01/rdf-schema#"
OWL_NS = "http://www.w3.org/2002/07/owl#"
XSD_NS = "http://www.w3.org/2001/XMLSchema#"
LOG_NS = "http://www.w3.org/2000/10/swap/log#"
MATH_NS = "http://www.w3.org/2000/10/swap/math#"
STRING_NS = "http://www.w3.org/2000/10/swap/string#"
LIST_NS = "http://www.w3.org/2000/10/swap/list#"
TIME_NS = "http://www.w3.org/2000/10/swap/time#"
OS_NS = "http://www.w3.org/2000/10/swap/os#"
CRYPTO_NS = "http://www.w3.org/2000/10/swap/crypto#"

XSD_STRING = XSD_NS + "string"
XSD_INTEGER = XSD_NS + "integer"
XSD_DECIMAL = XSD_NS + "decimal"
XSD_DOUBLE = XSD_NS + "double"
XSD_BOOLEAN = XSD_NS + "boolean"


class Term:
    """Base of the node-value union. Never instantiated directly."""

    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Iri(Term):
    value: str

    def __str__(self) -> str:
        return f"<{self.value}>"


@dataclass(frozen=True, slots=True)
class Literal(Term):
    lexical: str
    datatype: Optional[str] = None
    language: Optional[str] = None

    def __post_init__(self) -> None:
        if self.datatype is not None and self.language is not None:
            raise ValueError("a literal cannot carry both a datatype and a language tag")

    def __str__(self) -> str:
        if self.language:
            return f'"{self.lexical}"@{self.language}'
        if self.datatype:
            return f'"{self.lexical}"^^<{self.datatype}>'
        return f'"{self.lexical}"'


@dataclass(frozen=True, slots=True)
class Blank(Term):
    id: str

    def __str__(self) -> str:
        return f"_:{self.id}"


@dataclass(frozen=True, slots=True)
class UniVar(Term):
    name: str

    def __str__(self) -> str:
        return f"?{self.name}"


@dataclass(frozen=True, slots=True)
class ExiVar(Term):
    name: str

    def __str__(self) -> str:
        return f"_:{self.name}"


@dataclass(frozen=True, slots=True)
class ListTerm(Term):
    items: Tuple[Term, ...] = ()

    def __post_init__(self) -> None:
        if not isinstance(self.items, tuple):
            object.__setattr__(self, "items", tuple(self.items))

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self) -> Iterator[Term]:
        return iter(self.items)

    def __str__(self) -> str:
        return "(" + " ".join(str(i) for i in self.items) + ")"


class Quoted(Term):
    """A formula used as a term. Equality is up to renaming of the
    variables and blank nodes the formula itself binds."""

    __slots__ = ("formula", "_hash")

    def __init__(self, formula: "Formula"):
        object.__setattr__(self, "formula", formula)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Quoted is immutable")

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, Quoted):
            return NotImplemented
        if self.formula is other.formula:
            return True
        if len(self.formula.triples) != len(other.formula.triples):
            return False
        return self.formula.quoted_key() == other.formula.quoted_key()

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash(("quoted", self.formula.quoted_key()))
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self) -> str:
        return f"Quoted({self.formula!r})"

    def __str__(self) -> str:
        return "{ " + " . ".join(f"{s} {p} {o}" for s, p, o in self.formula.sorted_triples()) + " }"


VarTerm = Union[UniVar, ExiVar, Blank]


class Triple(tuple):
    __slots__ = ()

    def __new__(cls, subject: Term, predicate: Term, object: Term):
        if isinstance(predicate, ListTerm):
            raise TypeError("a list cannot be used as a predicate")
        return tuple.__new__(cls, (subject, predicate, object))

    def __getnewargs__(self):
        return tuple(self)

    @property
    def subject(self) -> Term:
        return self[0]

    @property
    def predicate(self) -> Term:
        return self[1]

    @property
    def object(self) -> Term:
        return self[2]

    def __repr__(self) -> str:
        return f"Triple({self[0]!r}, {self[1]!r}, {self[2]!r})"


# Variable name -> value, keyed by the variable term itself so universal
# and existential variables with the same name never collide.
Bindings = Dict[Term, Term]


class Formula:
    """A conjunctive set of triples with its own quantifier declarations."""

    __slots__ = ("triples", "universals", "existentials", "_cache")

    def __init__(
        self,
        triples: Iterable[Triple] = (),
        universals: Iterable[str] = (),
        existentials: Iterable[str] = (),
    ):
        self.triples: FrozenSet[Triple] = frozenset(triples)
        self.universals: FrozenSet[str] = frozenset(universals)
        self.existentials: FrozenSet[str] = frozenset(existentials)
        if self.universals & self.existentials:
            clash = ", ".join(sorted(self.universals & self.existentials))
            raise ValueError(f"names declared both universal and existential: {clash}")
        self._cache: Dict[str, object] = {}

    def __len__(self) -> int:
        return len(self.triples)

    def __iter__(self) -> Iterator[Triple]:
        return iter(self.triples)

    def __contains__(self, triple: object) -> bool:
        return triple in self.triples

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, Formula):
            return NotImplemented
        return (
            self.triples == other.triples
            and self.universals == other.universals
            and self.existentials == other.existentials
        )

    def __hash__(self) -> int:
        return hash((self.triples, self.universals, self.existentials))

    def __repr__(self) -> str:
        body = " . ".join(f"{s} {p} {o}" for s, p, o in self.sorted_triples())
        return f"Formula({{ {body} }})"

    def cached(self, key: str, compute: Callable[[], object]):
        try:
            return self._cache[key]
        except KeyError:
            value = self._cache[key] = compute()
            return value

    def sorted_triples(self) -> Tuple[Triple, ...]:
        return self.cached("sorted", lambda: tuple(sorted(self.triples, key=triple_key)))

    def quoted_key(self) -> str:
        from .canon import quoted_key

        return self.cached("quoted_key", lambda: quoted_key(self))

    def store(self):
        """Read-only triple index used by matching."""
        from .store import TripleStore

        return self.cached("store", lambda: TripleStore.from_triples(self.triples))

    def with_triples(self, triples: Iterable[Triple]) -> "Formula":
        return Formula(triples, self.universals, self.existentials)


EMPTY = Formula()


class Namespace:
    """Attribute-style IRI builder: ``LOG.implies`` -> Iri(...#implies)."""

    def __init__(self, base: str):
        self.base = base

    def __getattr__(self, name: str) -> Iri:
        if name.startswith("__"):
            raise AttributeError(name)
        return Iri(self.base + name)

    def __getitem__(self, name: str) -> Iri:
        return Iri(self.base + name)

    def __contains__(self, iri: object) -> bool:
        return isinstance(iri, Iri) and iri.value.startswith(self.base)


RDF = Namespace(RDF_NS)
RDFS = Namespace(RDFS_NS)
OWL = Namespace(OWL_NS)
XSD = Namespace(XSD_NS)
LOG = Namespace(LOG_NS)
MATH = Namespace(MATH_NS)
STRING = Namespace(STRING_NS)
LIST = Namespace(LIST_NS)
TIME = Namespace(TIME_NS)
OS = Namespace(OS_NS)
CRYPTO = Namespace(CRYPTO_NS)

RDF_TYPE = RDF.type
OWL_SAMEAS = OWL.sameAs
LOG_IMPLIES = LOG.implies

_doc_counter = itertools.count(1)


class BlankFactory:
    """Deterministic blank ids: a scope prefix plus a monotonic counter."""

    def __init__(self, prefix: Optional[str] = None):
        self.prefix = prefix if prefix is not None else f"n{next(_doc_counter)}_"
        self._counter = itertools.count(1)

    def __call__(self) -> Blank:
        return Blank(f"{self.prefix}{next(self._counter)}")


_fresh = BlankFactory("g")


def fresh_blank() -> Blank:
    return _fresh()


def string_literal(value: str) -> Literal:
    return Literal(value)


def integer_literal(value: int) -> Literal:
    return Literal(str(value), XSD_INTEGER)


# -- total order -----------------------------------------------------------

_KIND_RANK = {Iri: 0, Literal: 1, Blank: 2, ExiVar: 3, UniVar: 4, ListTerm: 5, Quoted: 6}


def term_key(term: Term) -> tuple:
    """Total order over terms: kind first, then lexical value, recursively."""
    kind = type(term)
    if kind is Iri:
        return (0, term.value)
    if kind is Literal:
        return (1, term.lexical, term.datatype or "", term.language or "")
    if kind is Blank:
        return (2, term.id)
    if kind is ExiVar:
        return (3, term.name)
    if kind is UniVar:
        return (4, term.name)
    if kind is ListTerm:
        return (5, tuple(term_key(i) for i in term.items))
    if kind is Quoted:
        return (6, term.formula.quoted_key())
    raise TypeError(f"not a term: {term!r}")


def triple_key(triple: Triple) -> tuple:
    return (term_key(triple[0]), term_key(triple[1]), term_key(triple[2]))


# -- traversal helpers -----------------------------------------------------

def is_variable(term: Term) -> bool:
    return isinstance(term, (UniVar, ExiVar, Blank))


def iter_terms(term: Term, into_quoted: bool = True) -> Iterator[Term]:
    """Yield ``term`` and every term nested in it (lists always, formulas optionally)."""
    yield term
    if isinstance(term, ListTerm):
        for item in term.items:
            yield from iter_terms(item, into_quoted)
    elif into_quoted and isinstance(term, Quoted):
        for triple in term.formula.triples:
            for t in triple:
                yield from iter_terms(t, into_quoted)


def formula_terms(f: Formula, into_quoted: bool = True) -> Iterator[Term]:
    for triple in f.triples:
        for t in triple:
            yield from iter_terms(t, into_quoted)


def variables_of(f: Formula, into_quoted: bool = True) -> Set[Term]:
    return {t for t in formula_terms(f, into_quoted) if isinstance(t, (UniVar, ExiVar, Blank))}


def contains_any(term: Term, variables: Set[Term]) -> bool:
    if not variables:
        return False
    kind = type(term)
    if kind is Iri or kind is Literal:
        return False
    if kind is ListTerm:
        return any(contains_any(i, variables) for i in term.items)
    if kind is Quoted:
        return any(contains_any(t, variables) for triple in term.formula.triples for t in triple)
    return term in variables


def map_terms(term: Term, fn: Callable[[Term], Optional[Term]], into_quoted: bool = True) -> Term:
    """Rebuild ``term`` bottom-up, replacing any leaf for which ``fn`` returns a value."""
    kind = type(term)
    if kind is ListTerm:
        items = tuple(map_terms(i, fn, into_quoted) for i in term.items)
        return term if all(a is b for a, b in zip(items, term.items)) else ListTerm(items)
    if kind is Quoted:
        if not into_quoted:
            return term
        inner = map_formula(term.formula, fn)
        return term if inner is term.formula else Quoted(inner)
    replaced = fn(term)
    return term if replaced is None else replaced


def map_formula(
    f: Formula,
    fn: Callable[[Term], Optional[Term]],
    universals: Optional[FrozenSet[str]] = None,
    existentials: Optional[FrozenSet[str]] = None,
) -> Formula:
    changed = False
    triples = []
    for triple in f.triples:
        new = tuple(map_terms(t, fn) for t in triple)
        if any(a is not b for a, b in zip(new, triple)):
            changed = True
            triples.append(Triple(*new))
        else:
            triples.append(triple)
    u = f.universals if universals is None else universals
    e = f.existentials if existentials is None else existentials
    if not changed and u == f.universals and e == f.existentials:
        return f
    return Formula(triples, u, e)


# -- operations ------------------------------------------------------------

def substitute_term(term: Term, bindings: Mapping[Term, Term]) -> Term:
    if not bindings:
        return term
    return map_terms(term, lambda t: bindings.get(t) if isinstance(t, (UniVar, ExiVar, Blank)) else None)


def substitute_variables(f: Formula, bindings: Mapping[Term, Term]) -> Formula:
    """Replace bound variables everywhere, nested formulas included.

    Declarations of variables that the bindings fix are dropped.
    """
    if not bindings:
        return f
    uni = {v.name for v in bindings if isinstance(v, UniVar)}
    exi = {v.name for v in bindings if isinstance(v, ExiVar)}

    def fn(t: Term) -> Optional[Term]:
        if isinstance(t, (UniVar, ExiVar, Blank)):
            return bindings.get(t)
        return None

    def walk(g: Formula) -> Formula:
        triples = []
        for triple in g.triples:
            triples.append(Triple(*(_subst(t) for t in triple)))
        return Formula(triples, g.universals - uni, g.existentials - exi)

    def _subst(t: Term) -> Term:
        kind = type(t)
        if kind is ListTerm:
            return ListTerm(tuple(_subst(i) for i in t.items))
        if kind is Quoted:
            return Quoted(walk(t.formula))
        value = fn(t)
        return t if value is None else value

    return walk(f)


def rewrite_equals(f: Formula, a: Term, b: Term) -> Formula:
    """Replace ``a`` by ``b`` at the top level only. Quoted formulas are opaque."""
    def fn(t: Term) -> Optional[Term]:
        return b if t == a else None

    triples = []
    for triple in f.triples:
        triples.append(Triple(*(map_terms(t, fn, into_quoted=False) if t != a else b for t in triple)))
    return Formula(triples, f.universals, f.existentials)


def _names(f: Formula) -> Set[str]:
    names: Set[str] = set(f.universals) | set(f.existentials)
    for t in formula_terms(f):
        if isinstance(t, Blank):
            names.add(t.id)
        elif isinstance(t, (UniVar, ExiVar)):
            names.add(t.name)
    _collect_declared(f, names)
    return names


def _collect_declared(f: Formula, names: Set[str]) -> None:
    for triple in f.triples:
        for t in triple:
            for sub in iter_terms(t, into_quoted=False):
                if isinstance(sub, Quoted):
                    names |= sub.formula.universals | sub.formula.existentials
                    _collect_declared(sub.formula, names)


def _fresh_name(base: str, taken: Set[str]) -> str:
    stem = base.rstrip("0123456789") or base
    i = 1
    while f"{stem}{i}" in taken:
        i += 1
    return f"{stem}{i}"


def _rename(f: Formula, reserved: Set[str], kinds: Tuple[type, ...], avoid: Iterable[str] = ()) -> Formula:
    # Fresh names also dodge ``avoid``: names used by the other conjuncts.
    used = _names(f)
    taken = set(reserved) | used | set(avoid)
    mapping: Dict[Tuple[type, str], str] = {}

    def new_name(kind: type, name: str) -> str:
        key = (kind, name)
        if key not in mapping:
            if name in reserved:
                fresh = _fresh_name(name, taken)
                taken.add(fresh)
                mapping[key] = fresh
            else:
                mapping[key] = name
        return mapping[key]

    def fn(t: Term) -> Optional[Term]:
        kind = type(t)
        if kind not in kinds:
            return None
        if kind is Blank:
            n = new_name(Blank, t.id)
            return None if n == t.id else Blank(n)
        n = new_name(kind, t.name)
        return None if n == t.name else kind(n)

    def walk(g: Formula) -> Formula:
        triples = [Triple(*(_walk_term(t) for t in triple)) for triple in g.triples]
        u = frozenset(new_name(UniVar, n) if UniVar in kinds else n for n in g.universals)
        e = frozenset(new_name(ExiVar, n) if ExiVar in kinds else n for n in g.existentials)
        return Formula(triples, u, e)

    def _walk_term(t: Term) -> Term:
        kind = type(t)
        if kind is ListTerm:
            return ListTerm(tuple(_walk_term(i) for i in t.items))
        if kind is Quoted:
            return Quoted(walk(t.formula))
        value = fn(t)
        return t if value is None else value

    return walk(f)


def rename_apart(f: Formula, reserved: Iterable[str]) -> Formula:
    """Rename every variable and blank node whose name is in ``reserved``."""
    reserved = set(reserved)
    if not reserved or not (_names(f) & reserved):
        return f
    return _rename(f, reserved, (UniVar, ExiVar, Blank))


def conjoin(formulas: Sequence[Formula]) -> Formula:
    """Union of triple sets; blank nodes and existentials never merge,
    universals with the same name do."""
    triples: Set[Triple] = set()
    universals: Set[str] = set()
    existentials: Set[str] = set()
    seen: Set[str] = set()
    exi_seen: Set[str] = set()
    for f in formulas:
        names = _names(f)
        clash = names & seen
        local_exi = {t.id for t in formula_terms(f) if isinstance(t, Blank)} | {
            t.name for t in formula_terms(f) if isinstance(t, ExiVar)
        } | set(f.existentials)
        if clash & local_exi:
            f = _rename(f, clash & local_exi, (ExiVar, Blank), seen)
        uni_clash = set(f.universals) & exi_seen
        if uni_clash:
            f = _rename(f, uni_clash, (UniVar,), seen)
        triples |= f.triples
        universals |= f.universals
        existentials |= f.existentials
        names = _names(f)
        seen |= names
        exi_seen |= {t.id for t in formula_terms(f) if isinstance(t, Blank)}
        exi_seen |= {t.name for t in formula_terms(f) if isinstance(t, ExiVar)} | set(f.existentials)
    return Formula(triples, universals, existentials - universals)


def isomorphic(f: Formula, g: Formula) -> bool:
    """True iff a bijective renaming of blank nodes and variables maps f onto g."""
    from .canon import isomorphic as _iso

    return _iso(f, g)
