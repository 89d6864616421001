"""Interned, indexed triple storage feeding the join kernel."""

from __future__ import annotations

from array import array
from typing import Dict, Iterable, List, Optional

from .model import Term, Triple

SHIFT = 32


def pair_key(a: int, b: int) -> int:
    return (a << SHIFT) | b


def triple_key3(s: int, p: int, o: int) -> int:
    return (((s << SHIFT) | p) << SHIFT) | o


class TripleStore:
    """Append-only triple table with every single and pair index.

    Triple ids grow monotonically, so an id range identifies the triples
    added during one fixpoint round.
    """

    def __init__(self) -> None:
        self.ids: Dict[Term, int] = {}
        self.terms: List[Term] = []
        self.triples: List[Triple] = []
        self.S = array("q")
        self.P = array("q")
        self.O = array("q")
        self.spo: Dict[int, int] = {}
        self.idx_s: Dict[int, List[int]] = {}
        self.idx_p: Dict[int, List[int]] = {}
        self.idx_o: Dict[int, List[int]] = {}
        self.idx_sp: Dict[int, List[int]] = {}
        self.idx_po: Dict[int, List[int]] = {}
        self.idx_so: Dict[int, List[int]] = {}

    @classmethod
    def from_triples(cls, triples: Iterable[Triple]) -> "TripleStore":
        store = cls()
        for t in triples:
            store.add(t)
        return store

    def __len__(self) -> int:
        return len(self.triples)

    def __contains__(self, triple: Triple) -> bool:
        ids = [self.ids.get(t) for t in triple]
        if None in ids:
            return False
        return triple_key3(*ids) in self.spo

    def index_of(self, triple: Triple) -> Optional[int]:
        ids = [self.ids.get(t) for t in triple]
        if None in ids:
            return None
        return self.spo.get(triple_key3(*ids))

    def intern(self, term: Term) -> int:
        i = self.ids.get(term)
        if i is None:
            i = self.ids[term] = len(self.terms)
            self.terms.append(term)
        return i

    def lookup(self, term: Term) -> Optional[int]:
        return self.ids.get(term)

    def add(self, triple: Triple) -> bool:
        s, p, o = (self.intern(t) for t in triple)
        key = triple_key3(s, p, o)
        if key in self.spo:
            return False
        tid = len(self.triples)
        self.spo[key] = tid
        self.triples.append(triple)
        self.S.append(s)
        self.P.append(p)
        self.O.append(o)
        self.idx_s.setdefault(s, []).append(tid)
        self.idx_p.setdefault(p, []).append(tid)
        self.idx_o.setdefault(o, []).append(tid)
        self.idx_sp.setdefault(pair_key(s, p), []).append(tid)
        self.idx_po.setdefault(pair_key(p, o), []).append(tid)
        self.idx_so.setdefault(pair_key(s, o), []).append(tid)
        return True

    def with_predicate(self, predicate: Term) -> List[Triple]:
        i = self.ids.get(predicate)
        if i is None:
            return []
        return [self.triples[t] for t in self.idx_p.get(i, ())]

    def kernel_args(self):
        return (
            self.S, self.P, self.O,
            self.idx_s, self.idx_p, self.idx_o,
            self.idx_sp, self.idx_po, self.idx_so,
            self.spo,
        )
