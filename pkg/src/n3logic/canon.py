"""Blank-node canonical labeling and formula isomorphism.

A formula (nested formulas and lists included) is flattened into a labeled
graph: one node per relabelable variable, per distinct fixed atom, per list
occurrence, per formula occurrence and per triple. Colors are refined to a
fixpoint from the multiset of neighbor colors; ties between variables are
broken by individualizing one candidate at a time.
"""

from __future__ import annotations

from collections import Counter
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .model import (
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
    iter_terms,
    term_key,
)

# Edge labels: subject/predicate/object, formula membership, list positions.
_SUBJ, _PRED, _OBJ, _MEMBER, _LIST0 = 0, 1, 2, 3, 10

# Exhaustive tie-breaking is exponential on highly symmetric inputs. Past
# this many leaves the first candidate is taken, which is still a valid
# labeling but no longer guaranteed canonical.
LEAF_BUDGET = 512


class _Graph:
    __slots__ = ("init", "adj", "var_nodes", "var_terms")

    def __init__(self) -> None:
        self.init: List[tuple] = []
        self.adj: List[List[Tuple[int, int, int]]] = []
        self.var_nodes: Dict[Term, int] = {}
        self.var_terms: Dict[int, Term] = {}

    def add_node(self, sig: tuple) -> int:
        self.init.append(sig)
        self.adj.append([])
        return len(self.init) - 1

    def add_edge(self, a: int, b: int, label: int) -> None:
        self.adj[a].append((label, 0, b))
        self.adj[b].append((label, 1, a))


def _var_class(term: Term) -> str:
    # Blank nodes and existential variables are interchangeable.
    return "U" if isinstance(term, UniVar) else "E"


def _build(graph: _Graph, f: Formula, relabel: Callable[[Term], bool]) -> int:
    atoms: Dict[tuple, int] = {}

    def term_node(t: Term, scope: Optional[Dict[Term, int]], outer_exi: frozenset) -> int:
        kind = type(t)
        if kind is ListTerm:
            n = graph.add_node((4, len(t.items)))
            for i, item in enumerate(t.items):
                graph.add_edge(n, term_node(item, scope, outer_exi), _LIST0 + i)
            return n
        if kind is Quoted:
            return formula_node(t.formula, outer_exi)
        if kind in (Blank, ExiVar, UniVar) and relabel(t):
            # Blank nodes and undeclared existentials inside a quoted formula
            # belong to that formula alone, matching quoted-term equality.
            if scope is not None and (kind is Blank or (kind is ExiVar and t.name not in outer_exi)):
                n = scope.get(t)
                if n is None:
                    n = scope[t] = graph.add_node((1, "E", "local"))
                return n
            n = graph.var_nodes.get(t)
            if n is None:
                n = graph.add_node((1, _var_class(t)))
                graph.var_nodes[t] = n
                graph.var_terms[n] = t
            return n
        key = term_key(t)
        n = atoms.get(key)
        if n is None:
            n = atoms[key] = graph.add_node((0, key))
        return n

    def formula_node(g: Formula, outer_exi: Optional[frozenset]) -> int:
        nested = outer_exi is not None
        n = graph.add_node((2,) if nested else (3,))
        scope: Optional[Dict[Term, int]] = {} if nested else None
        inner_exi = (outer_exi or frozenset()) | g.existentials
        for s, p, o in g.triples:
            tn = graph.add_node((5,))
            graph.add_edge(n, tn, _MEMBER)
            graph.add_edge(tn, term_node(s, scope, inner_exi), _SUBJ)
            graph.add_edge(tn, term_node(p, scope, inner_exi), _PRED)
            graph.add_edge(tn, term_node(o, scope, inner_exi), _OBJ)
        return n

    return formula_node(f, None)


def _rank(sigs: Sequence[tuple]) -> List[int]:
    order = {s: i for i, s in enumerate(sorted(set(sigs)))}
    return [order[s] for s in sigs]


def _refine(graph: _Graph, colors: List[int]) -> List[int]:
    classes = len(set(colors))
    while True:
        sigs = [
            (colors[v], tuple(sorted((lab, d, colors[u]) for lab, d, u in graph.adj[v])))
            for v in range(len(colors))
        ]
        new = _rank(sigs)
        count = len(set(new))
        if count == classes:
            return new
        colors, classes = new, count


def _individualize(colors: List[int], node: int) -> List[int]:
    out = [2 * c for c in colors]
    out[node] = 2 * colors[node] - 1
    return out


def _tied_class(colors: List[int], var_nodes: Sequence[int]) -> Optional[List[int]]:
    groups: Dict[int, List[int]] = {}
    for v in var_nodes:
        groups.setdefault(colors[v], []).append(v)
    tied = [(c, members) for c, members in groups.items() if len(members) > 1]
    if not tied:
        return None
    tied.sort(key=lambda cm: (len(cm[1]), cm[0]))
    return sorted(tied[0][1])


def _certificate(graph: _Graph, colors: List[int]) -> tuple:
    edges = sorted(
        (colors[a], lab, colors[b]) for a in range(len(colors)) for lab, d, b in graph.adj[a] if d == 0
    )
    nodes = sorted((colors[v], graph.init[v]) for v in range(len(colors)))
    return (tuple(nodes), tuple(edges))


def canonical_order(f: Formula, relabel: Callable[[Term], bool]) -> List[Term]:
    """Relabelable variables of ``f`` in canonical order."""
    graph = _Graph()
    _build(graph, f, relabel)
    if not graph.var_nodes:
        return []
    var_nodes = sorted(graph.var_nodes.values())
    start = _refine(graph, _rank(graph.init))
    best: List[Optional[tuple]] = [None, None]
    leaves = [0]

    def search(colors: List[int]) -> None:
        tied = _tied_class(colors, var_nodes)
        if tied is None:
            leaves[0] += 1
            cert = _certificate(graph, colors)
            if best[0] is None or cert < best[0]:
                best[0], best[1] = cert, tuple(colors)
            return
        candidates = tied if leaves[0] < LEAF_BUDGET else tied[:1]
        for v in candidates:
            search(_refine(graph, _individualize(colors, v)))
            if leaves[0] >= LEAF_BUDGET:
                break

    search(start)
    colors = best[1]
    ordered = sorted(var_nodes, key=lambda v: colors[v])
    return [graph.var_terms[v] for v in ordered]


def canonical_mapping(
    f: Formula, relabel: Callable[[Term], bool] = lambda t: True, blank_prefix: str = "c"
) -> Dict[Term, Term]:
    """Map each relabelable variable to a canonical replacement term.

    Blank nodes and existentials become ``Blank("cN")``, universals ``UniVar("vN")``.
    """
    mapping: Dict[Term, Term] = {}
    nb = nu = 0
    for t in canonical_order(f, relabel):
        if isinstance(t, UniVar):
            mapping[t] = UniVar(f"v{nu}")
            nu += 1
        else:
            mapping[t] = Blank(f"{blank_prefix}{nb}")
            nb += 1
    return mapping


def canonical_formula(f: Formula, relabel: Callable[[Term], bool] = lambda t: True) -> Formula:
    """``f`` with every variable renamed canonically, quoted formulas included.

    Blank nodes local to a quoted formula at depth d are named ``qdcN``.
    """

    def nested(g: Formula, outer_exi: frozenset, depth: int) -> Formula:
        def local(t: Term) -> bool:
            return isinstance(t, Blank) or (isinstance(t, ExiVar) and t.name not in outer_exi)

        mapping = canonical_mapping(g, local, f"q{depth}c") if depth else canonical_mapping(g, relabel)
        g = relabel_formula(g, mapping, into_quoted=False) if mapping else g
        inner_exi = outer_exi | g.existentials

        def walk(t: Term) -> Term:
            if type(t) is ListTerm:
                return ListTerm(tuple(walk(i) for i in t.items))
            if type(t) is Quoted:
                return Quoted(nested(t.formula, inner_exi, depth + 1))
            return t

        return Formula((Triple(*(walk(t) for t in tr)) for tr in g.triples), g.universals, g.existentials)

    return nested(f, frozenset(), 0)


def relabel_formula(f: Formula, mapping: Dict[Term, Term], into_quoted: bool = True) -> Formula:
    """Apply a variable renaming, declarations included; with ``into_quoted``
    false, quoted formulas keep their local blank nodes and existentials."""

    def name_of(t: Term) -> Optional[str]:
        if isinstance(t, Blank):
            return t.id
        if isinstance(t, (UniVar, ExiVar)):
            return t.name
        return None

    uni_names = {t.name: name_of(v) for t, v in mapping.items() if isinstance(t, UniVar)}
    exi_names = {t.name: name_of(v) for t, v in mapping.items() if isinstance(t, ExiVar)}

    def walk_term(t: Term, depth: int, outer_exi: frozenset) -> Term:
        kind = type(t)
        if kind is ListTerm:
            return ListTerm(tuple(walk_term(i, depth, outer_exi) for i in t.items))
        if kind is Quoted:
            return Quoted(walk(t.formula, depth + 1, outer_exi))
        if depth and not into_quoted:
            if kind is Blank or (kind is ExiVar and t.name not in outer_exi):
                return t
        return mapping.get(t, t) if kind in (Blank, ExiVar, UniVar) else t

    def walk(g: Formula, depth: int = 0, outer_exi: frozenset = frozenset()) -> Formula:
        keep_local = depth and not into_quoted
        inner_exi = outer_exi | g.existentials
        triples = [Triple(*(walk_term(t, depth, inner_exi) for t in triple)) for triple in g.triples]
        universals = {uni_names.get(n, n) for n in g.universals}
        existentials = set()
        for n in g.existentials:
            if keep_local:
                existentials.add(n)
                continue
            target = exi_names.get(n, n)
            # An existential mapped onto a blank node needs no declaration.
            if n in exi_names and not isinstance(mapping[ExiVar(n)], ExiVar):
                continue
            existentials.add(target)
        return Formula(triples, universals, existentials - universals)

    return walk(f)


def _render_term(t: Term) -> str:
    kind = type(t)
    if kind is Iri:
        return f"<{t.value}>"
    if kind is Literal:
        lex = t.lexical.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
        if t.language:
            return f'"{lex}"@{t.language}'
        if t.datatype:
            return f'"{lex}"^^<{t.datatype}>'
        return f'"{lex}"'
    if kind is Blank:
        return f"_:{t.id}"
    if kind is ExiVar:
        return f"_:{t.name}"
    if kind is UniVar:
        return f"?{t.name}"
    if kind is ListTerm:
        return "(" + " ".join(_render_term(i) for i in t.items) + ")"
    if kind is Quoted:
        return "{" + _render_body(t.formula) + "}"
    raise TypeError(t)


def _render_body(f: Formula) -> str:
    lines = sorted(" ".join(_render_term(x) for x in triple) for triple in f.triples)
    return " . ".join(lines)


def _declared_within(f: Formula) -> set:
    names = set(f.universals)
    for triple in f.triples:
        for t in triple:
            for sub in iter_terms(t):
                if isinstance(sub, Quoted):
                    names |= sub.formula.universals
    return names


def quoted_key(f: Formula) -> str:
    """Identity key for a quoted formula: canonical up to renaming of the
    blank nodes, existentials and universals bound inside ``f``."""
    bound = _declared_within(f)

    def local(t: Term) -> bool:
        return not isinstance(t, UniVar) or t.name in bound

    return _render_body(canonical_formula(f, local))


def isomorphic(f: Formula, g: Formula) -> bool:
    if len(f.triples) != len(g.triples):
        return False
    if f.triples == g.triples:
        return True
    graph = _Graph()
    _build(graph, f, lambda t: True)
    split = len(graph.init)
    f_vars = dict(graph.var_nodes)
    graph.var_nodes = {}
    _build(graph, g, lambda t: True)
    g_vars = dict(graph.var_nodes)
    if len(f_vars) != len(g_vars):
        return False
    f_nodes = sorted(f_vars.values())
    g_nodes = sorted(g_vars.values())
    f_term = {n: t for t, n in f_vars.items()}
    g_term = {n: t for t, n in g_vars.items()}
    n_total = len(graph.init)

    def balanced(colors: List[int]) -> bool:
        return Counter(colors[:split]) == Counter(colors[split:n_total])

    def verify(colors: List[int]) -> bool:
        by_color = {colors[n]: n for n in g_nodes}
        mapping = {}
        for n in f_nodes:
            m = by_color.get(colors[n])
            if m is None:
                return False
            mapping[f_term[n]] = g_term[m]
        return relabel_formula(f, mapping).triples == g.triples

    def search(colors: List[int]) -> bool:
        if not balanced(colors):
            return False
        groups: Dict[int, List[int]] = {}
        for n in f_nodes:
            groups.setdefault(colors[n], []).append(n)
        tied = [(len(ms), c) for c, ms in groups.items() if len(ms) > 1]
        if not tied:
            return verify(colors)
        _, color = min(tied)
        u = groups[color][0]
        for w in g_nodes:
            if colors[w] != color:
                continue
            trial = [2 * c for c in colors]
            trial[u] = trial[w] = 2 * color - 1
            if search(_refine(graph, trial)):
                return True
        return False

    return search(_refine(graph, _rank(graph.init)))
