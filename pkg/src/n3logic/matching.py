"""Graph pattern matching on top of the join kernel.

Flat pattern positions (constants and variables) go to the kernel. A
position holding a list or quoted formula that still contains pattern
variables becomes an anonymous slot; its data value is unified against the
structured pattern afterwards.
"""

from __future__ import annotations

from typing import Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Sequence, Set, Tuple

from . import kernels
from .model import (
    Blank,
    Bindings,
    ExiVar,
    Formula,
    ListTerm,
    Quoted,
    Term,
    Triple,
    UniVar,
    contains_any,
    iter_terms,
)
from .store import TripleStore

NO_LIMIT = 1 << 62
_VAR_KINDS = (UniVar, ExiVar, Blank)


def pattern_variables(pattern: Formula) -> Set[Term]:
    """Default pattern variables: every universal anywhere in the pattern,
    plus the blank nodes and existentials of its top level."""
    found: Set[Term] = set()
    for triple in pattern.triples:
        for t in triple:
            for sub in iter_terms(t, into_quoted=False):
                if isinstance(sub, _VAR_KINDS):
                    found.add(sub)
            for sub in iter_terms(t, into_quoted=True):
                if isinstance(sub, UniVar):
                    found.add(sub)
    return found


def _is_var(t: Term, variables: Set[Term]) -> bool:
    return type(t) in _VAR_KINDS and t in variables


# -- structural unification ------------------------------------------------

def unify(
    p: Term,
    d: Term,
    b: Bindings,
    variables: Set[Term],
    restrict: Optional[Mapping[Term, tuple]] = None,
) -> Iterator[Bindings]:
    """Bind pattern ``p`` to data ``d``; yields each consistent extension of ``b``."""
    kind = type(p)
    if kind in _VAR_KINDS and p in variables:
        cur = b.get(p)
        if cur is None:
            if restrict and p in restrict and not isinstance(d, restrict[p]):
                return
            nb = dict(b)
            nb[p] = d
            yield nb
        elif cur == d:
            yield b
        return
    if kind is ListTerm:
        if type(d) is not ListTerm or len(d.items) != len(p.items):
            return
        yield from _unify_seq(p.items, d.items, 0, b, variables, restrict)
        return
    if kind is Quoted:
        if type(d) is not Quoted:
            return
        if not contains_any(p, variables):
            if p == d:
                yield b
            return
        yield from match_exact(p.formula, d.formula, b, variables, restrict)
        return
    if p == d:
        yield b


def _unify_seq(ps, ds, i, b, variables, restrict) -> Iterator[Bindings]:
    if i == len(ps):
        yield b
        return
    for nb in unify(ps[i], ds[i], b, variables, restrict):
        yield from _unify_seq(ps, ds, i + 1, nb, variables, restrict)


def _locals_of(f: Formula, variables: Set[Term]) -> Dict[Term, tuple]:
    local: Dict[Term, tuple] = {}
    declared = set(f.universals)
    for triple in f.triples:
        for t in triple:
            for sub in iter_terms(t):
                if isinstance(sub, Quoted):
                    declared |= sub.formula.universals
    for triple in f.triples:
        for t in triple:
            for sub in iter_terms(t):
                if sub in variables:
                    continue
                if isinstance(sub, (Blank, ExiVar)):
                    local[sub] = (Blank, ExiVar)
                elif isinstance(sub, UniVar) and sub.name in declared:
                    local[sub] = (UniVar,)
    return local


def match_exact(
    pf: Formula,
    df: Formula,
    b: Bindings,
    variables: Set[Term],
    restrict: Optional[Mapping[Term, tuple]] = None,
) -> Iterator[Bindings]:
    """Match a quoted pattern formula against a quoted data formula as terms:
    same size, every data triple used once, locally bound names renamed
    one-to-one."""
    if len(pf.triples) != len(df.triples):
        return
    local = _locals_of(pf, variables)
    allvars = set(variables) | set(local)
    merged = dict(restrict or {})
    merged.update(local)
    ptriples = sorted(pf.triples, key=lambda t: sum(1 for x in t if x in allvars))
    dtriples = list(df.triples)
    used = [False] * len(dtriples)
    seen: Set[Tuple] = set()

    def rec(i: int, cur: Bindings) -> Iterator[Bindings]:
        if i == len(ptriples):
            yield cur
            return
        pt = ptriples[i]
        for j, dt in enumerate(dtriples):
            if used[j]:
                continue
            used[j] = True
            for nb in _unify_seq(pt, dt, 0, cur, allvars, merged):
                yield from rec(i + 1, nb)
            used[j] = False

    for full in rec(0, b):
        values = [full[v] for v in local if v in full]
        if len(set(values)) != len(values):
            continue
        out = {k: v for k, v in full.items() if k not in local}
        key = tuple(sorted(((repr(k), repr(v)) for k, v in out.items())))
        if key in seen:
            continue
        seen.add(key)
        yield out


# -- flat compilation -------------------------------------------------------

class _Compiled:
    __slots__ = ("patterns", "slot_vars", "complex")

    def __init__(self) -> None:
        self.patterns: List[Tuple[int, int, int]] = []
        self.slot_vars: List[Optional[Term]] = []
        self.complex: List[Tuple[int, Term]] = []


def _compile(
    triples: Sequence[Triple], store: TripleStore, b: Bindings, variables: Set[Term]
) -> Optional[_Compiled]:
    c = _Compiled()
    slots: Dict[Term, int] = {}
    for triple in triples:
        codes = []
        for t in triple:
            kind = type(t)
            if kind in _VAR_KINDS and t in variables:
                bound = b.get(t)
                if bound is not None:
                    if contains_any(bound, variables) and type(bound) in (ListTerm, Quoted):
                        k = len(c.slot_vars)
                        c.slot_vars.append(None)
                        c.complex.append((k, bound))
                        codes.append(-k - 1)
                        continue
                    i = store.lookup(bound)
                    if i is None:
                        return None
                    codes.append(i)
                    continue
                k = slots.get(t)
                if k is None:
                    k = slots[t] = len(c.slot_vars)
                    c.slot_vars.append(t)
                codes.append(-k - 1)
            elif (kind is ListTerm or kind is Quoted) and contains_any(t, variables):
                k = len(c.slot_vars)
                c.slot_vars.append(None)
                c.complex.append((k, t))
                codes.append(-k - 1)
            else:
                i = store.lookup(t)
                if i is None:
                    return None
                codes.append(i)
        c.patterns.append(tuple(codes))
    return c


def solve(
    triples: Sequence[Triple],
    store: TripleStore,
    bindings: Optional[Bindings] = None,
    variables: Optional[Set[Term]] = None,
    ranges: Optional[Sequence[Tuple[int, int]]] = None,
    restrict: Optional[Mapping[Term, tuple]] = None,
) -> Iterator[Bindings]:
    """All extensions of ``bindings`` under which every triple is in ``store``.

    Yielded dicts include bindings for blank/existential pattern variables.
    """
    b = dict(bindings or {})
    variables = variables if variables is not None else set()
    triples = list(triples)
    if not triples:
        yield b
        return
    compiled = _compile(triples, store, b, variables)
    if compiled is None:
        return
    n = len(compiled.patterns)
    if ranges is None:
        lo = [0] * n
        hi = [NO_LIMIT] * n
    else:
        lo = [r[0] for r in ranges]
        hi = [r[1] for r in ranges]
    nslots = len(compiled.slot_vars)
    rows = kernels.join(compiled.patterns, nslots, [-1] * nslots, *store.kernel_args(), lo, hi)
    terms = store.terms
    for row in rows:
        nb = dict(b)
        for k, var in enumerate(compiled.slot_vars):
            if var is not None:
                nb[var] = terms[row[k]]
        if not compiled.complex:
            yield nb
            continue
        yield from _unify_complex(compiled.complex, 0, row, terms, nb, variables, restrict)


def _unify_complex(cx, i, row, terms, b, variables, restrict) -> Iterator[Bindings]:
    if i == len(cx):
        yield b
        return
    slot, pattern = cx[i]
    for nb in unify(pattern, terms[row[slot]], b, variables, restrict):
        yield from _unify_complex(cx, i + 1, row, terms, nb, variables, restrict)


def project(b: Bindings, keep: Iterable[Term]) -> Bindings:
    return {k: b[k] for k in keep if k in b and b[k] != k}


def bindings_key(b: Mapping[Term, Term]) -> FrozenSet:
    return frozenset(b.items())


def match(
    pattern: Formula,
    data: Formula,
    seed: Optional[Bindings] = None,
    variables: Optional[Set[Term]] = None,
) -> List[Bindings]:
    """Distinct bindings of the pattern's universals under which the pattern
    is a subgraph of ``data``. Built-in predicates are not evaluated here."""
    seed = dict(seed or {})
    if variables is None:
        variables = pattern_variables(pattern)
    exported = {v for v in variables if isinstance(v, UniVar)} | set(seed)
    out: List[Bindings] = []
    seen: Set[FrozenSet] = set()
    for b in solve(pattern.sorted_triples(), data.store(), seed, variables):
        p = project(b, exported)
        key = bindings_key(p)
        if key not in seen:
            seen.add(key)
            out.append(p)
    return out
