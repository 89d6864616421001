"""Forward-chaining derivation: rules, inclusion, closure, support, filtering.

Rules are ``{A} log:implies {C}`` triples at the top level of a formula.
Closure runs rounds to a fixpoint. Each round evaluates every rule against
a snapshot of the knowledge base, restricted semi-naively so that at least
one graph triple of every match is new since the previous round. Builtin
triples in an antecedent are evaluated after the graph join, in whichever
order lets their arguments get bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Set, Tuple

from .builtins import EvalContext, NotEvaluable, Satisfied, evaluate, is_builtin
from .errors import ClosureLimitError
from .matching import match, pattern_variables, solve
from .model import (
    LOG_IMPLIES,
    Bindings,
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
    conjoin,
    iter_terms,
    substitute_variables,
    triple_key,
)
from .store import TripleStore

__all__ = [
    "EngineLimits",
    "FiringRecord",
    "Rule",
    "apply_rule",
    "conclusion",
    "extract_rules",
    "filter",
    "includes",
    "match",
    "not_includes",
    "supports",
    "witnesses",
]


@dataclass(frozen=True)
class EngineLimits:
    max_iterations: int = 10_000
    max_triples: int = 1_000_000
    builtin_timeout: float = 30.0
    allow_network: bool = True

    def __post_init__(self) -> None:
        if self.max_iterations <= 0 or self.max_triples <= 0 or self.builtin_timeout <= 0:
            raise ValueError("engine limits must be strictly positive")


# -- inclusion ------------------------------------------------------------------------

def witnesses(
    f: Formula,
    g: Formula,
    export: Set[Term] = frozenset(),
    wildcards: Set[Term] = frozenset(),
) -> List[Bindings]:
    """Distinct bindings of ``export`` under which ``g`` is N3-derivable from
    ``f`` by renaming, instantiating universals and generalizing to blanks.

    ``g``'s own universals, blanks and existentials are pattern variables;
    ``export`` and ``wildcards`` add extra ones, only ``export`` is reported.
    """
    variables = pattern_variables(g) | set(export) | set(wildcards)
    out: List[Bindings] = []
    seen = set()
    for b in solve(g.sorted_triples(), f.store(), {}, variables):
        p = {v: b[v] for v in export if v in b}
        key = frozenset(p.items())
        if key not in seen:
            seen.add(key)
            out.append(p)
            if not export:
                break
    return out


def includes(f: Formula, g: Formula) -> bool:
    return bool(witnesses(f, g))


def includes_witness(f: Formula, g: Formula) -> Optional[Bindings]:
    """The first match of ``g``'s universals against ``f``, or None."""
    found = match(g, f)
    return found[0] if found else None


def not_includes(f: Formula, g: Formula) -> bool:
    return not includes(f, g)


# -- rules --------------------------------------------------------------------------

@dataclass(frozen=True)
class Rule:
    antecedent: Formula
    consequent: Formula
    universals: FrozenSet[str]

    @classmethod
    def from_triple(cls, triple: Triple, universals: Set[str] = frozenset()) -> "Rule":
        s, _, o = triple
        if not (isinstance(s, Quoted) and isinstance(o, Quoted)):
            raise ValueError("a rule relates two quoted formulas")
        names = {t.name for q in (s, o) for t in iter_terms(q) if isinstance(t, UniVar)}
        return cls(s.formula, o.formula, frozenset(names - _nested_declared(s.formula, o.formula)))


class FiringRecord:
    """(rule, bindings) pairs that already fired in one closure."""

    def __init__(self) -> None:
        self._seen: Set[Tuple[object, FrozenSet]] = set()

    def __len__(self) -> int:
        return len(self._seen)

    def check_and_add(self, rule_key: object, bindings: Bindings) -> bool:
        key = (rule_key, frozenset(bindings.items()))
        if key in self._seen:
            return False
        self._seen.add(key)
        return True


def _nested_declared(*formulas: Formula) -> Set[str]:
    names: Set[str] = set()
    for f in formulas:
        for t in _top_terms(f):
            for sub in iter_terms(t):
                if isinstance(sub, Quoted):
                    names |= sub.formula.universals
    return names


def _top_terms(f: Formula) -> Iterator[Term]:
    """Terms of f's triples, with list members, but not inside formulas."""
    for triple in f.triples:
        for t in triple:
            yield from iter_terms(t, into_quoted=False)


def _internal(t: Term) -> UniVar:
    # The parser never produces names starting with "?", so these cannot
    # collide with variables occurring in data.
    if isinstance(t, UniVar):
        return UniVar("?" + t.name)
    if isinstance(t, ExiVar):
        return UniVar("?_e:" + t.name)
    return UniVar("?_:" + t.id)


class _CompiledRule:
    """A rule with its variables renamed apart from all data."""

    def __init__(self, key: object, rule: Rule):
        self.key = key
        self.rule = rule
        rename: Dict[Term, Term] = {UniVar(n): _internal(UniVar(n)) for n in rule.universals}
        for t in _top_terms(rule.antecedent):
            if isinstance(t, (Blank, ExiVar)):
                rename[t] = _internal(t)
        self.variables: Set[Term] = set(rename.values())
        self.back = {v: k for k, v in rename.items() if isinstance(k, UniVar)}
        ante = _rename(rule.antecedent, rename)
        self.graph: List[Triple] = []
        self.builtins: List[Triple] = []
        for t in ante.sorted_triples():
            (self.builtins if is_builtin(t[1]) else self.graph).append(t)
        cons_rename = {k: v for k, v in rename.items() if isinstance(k, UniVar)}
        self.consequent = _rename(rule.consequent, cons_rename)
        self.fresh_targets = sorted(
            {t for t in _top_terms(self.consequent) if isinstance(t, (Blank, ExiVar))},
            key=repr,
        )
        self.antecedent_vars = {v for t in self.graph + self.builtins for x in t for v in iter_terms(x) if v in self.variables}
        # Consequents of plain atoms, all bound by the antecedent, skip the
        # general substitute-and-match path.
        self.flat: Optional[Tuple[Triple, ...]] = None
        cons = self.consequent
        if not self.fresh_targets and not cons.universals and not cons.existentials and all(
            type(x) in (Iri, Literal) or x in self.antecedent_vars for tr in cons.triples for x in tr
        ):
            self.flat = cons.sorted_triples()

    def matches(
        self,
        store: TripleStore,
        ranges: Optional[Sequence[Tuple[int, int]]],
        ctx: EvalContext,
    ) -> Iterator[Bindings]:
        for b in solve(self.graph, store, {}, self.variables, ranges):
            yield from self._builtins(b, list(self.builtins), ctx)

    def _builtins(self, b: Bindings, pending: List[Triple], ctx: EvalContext) -> Iterator[Bindings]:
        if not pending:
            yield b
            return
        reasons = []
        for i, (s, p, o) in enumerate(pending):
            outcome = evaluate(p, s, o, b, ctx, self.variables)
            if isinstance(outcome, NotEvaluable):
                reasons.append(outcome.reason)
                continue
            if isinstance(outcome, Satisfied):
                rest = pending[:i] + pending[i + 1:]
                for nb in outcome.alternatives:
                    yield from self._builtins(nb, rest, ctx)
            return
        ctx.note(f"rule match dropped, builtins never became evaluable: {'; '.join(reasons)}")

    def pattern(self, b: Bindings) -> Tuple[List[Triple], Set[Term]]:
        """Consequent triples under ``b`` with its blank nodes left as wildcards."""
        wild = {t: _internal(t) for t in self.fresh_targets}
        g = substitute_variables(self.consequent, {**b, **wild})
        return list(g.triples), set(wild.values()) | (self.variables - set(b))

    def instantiate(self, b: Bindings, fresh: BlankFactory) -> Tuple[List[Triple], Set[str]]:
        mapping: Dict[Term, Term] = dict(b)
        for t in self.fresh_targets:
            mapping[t] = fresh()
        for internal, original in self.back.items():
            mapping.setdefault(internal, original)
        g = substitute_variables(self.consequent, mapping)
        return list(g.sorted_triples()), set(self.consequent.universals)


def _rename(f: Formula, mapping: Dict[Term, Term]) -> Formula:
    """Rename variables everywhere except where a nested formula redeclares them."""

    def walk(g: Formula, shadowed: FrozenSet[str]) -> Formula:
        triples = [Triple(*(term(t, shadowed) for t in triple)) for triple in g.triples]
        return Formula(triples, g.universals, g.existentials)

    def term(t: Term, shadowed: FrozenSet[str]) -> Term:
        kind = type(t)
        if kind is ListTerm:
            return ListTerm(tuple(term(i, shadowed) for i in t.items))
        if kind is Quoted:
            inner = shadowed | t.formula.universals
            return Quoted(walk(t.formula, inner))
        if kind is UniVar and t.name in shadowed:
            return t
        return mapping.get(t, t)

    return walk(f, frozenset())


def extract_rules(f: Formula, diagnostics: Optional[List[str]] = None) -> List[Tuple[Triple, Rule]]:
    """Rules stated at the top level of ``f``, in a deterministic order.

    A rule whose consequent uses a variable quantified at this level but
    absent from its antecedent is rejected with a diagnostic.
    """
    out = []
    for triple in f.sorted_triples():
        rule = _rule_of(triple, f.universals, diagnostics)
        if rule is not None:
            out.append((triple, rule))
    return out


def _rule_of(triple: Triple, universals, diagnostics) -> Optional[Rule]:
    s, p, o = triple
    if p != LOG_IMPLIES or not isinstance(s, Quoted) or not isinstance(o, Quoted):
        return None
    rule = Rule.from_triple(triple)
    ante_names = {t.name for t in iter_terms(s) if isinstance(t, UniVar)}
    cons_names = {t.name for t in iter_terms(o) if isinstance(t, UniVar)} & rule.universals
    unbound = sorted(n for n in cons_names - ante_names if n in universals)
    if unbound:
        if diagnostics is not None:
            names = ", ".join("?" + n for n in unbound)
            diagnostics.append(f"rule rejected, consequent variables not in antecedent: {names}")
        return None
    return rule


# -- closure ------------------------------------------------------------------------

def _fresh_factory(store: TripleStore) -> BlankFactory:
    ids = {t.id for t in store.terms if isinstance(t, Blank)}
    k = 0
    while any(i.startswith(f"e{k}_") for i in ids):
        k += 1
    return BlankFactory(f"e{k}_")


class _Closure:
    def __init__(self, f: Formula, limits: EngineLimits, ctx: EvalContext):
        self.limits = limits
        self.ctx = ctx
        self.store = TripleStore.from_triples(f.sorted_triples())
        self.universals = set(f.universals)
        self.existentials = set(f.existentials)
        self.rules: Dict[Triple, _CompiledRule] = {}
        self.fresh_rules: List[_CompiledRule] = []
        self.fired = FiringRecord()
        self.fresh = _fresh_factory(self.store)
        self.derived = 0

    def formula(self) -> Formula:
        return Formula(self.store.triples, self.universals, self.existentials - self.universals)

    def discover(self, lo: int, hi: int) -> None:
        pid = self.store.lookup(LOG_IMPLIES)
        if pid is None:
            return
        for tid in self.store.idx_p.get(pid, ()):
            if lo <= tid < hi:
                triple = self.store.triples[tid]
                if triple in self.rules:
                    continue
                rule = _rule_of(triple, self.universals, self.ctx.diagnostics)
                if rule is None:
                    continue
                compiled = _CompiledRule(triple, rule)
                self.rules[triple] = compiled
                self.fresh_rules.append(compiled)

    def satisfied(self, rule: _CompiledRule, b: Bindings, hi: int) -> bool:
        triples, wild = rule.pattern(b)
        ranges = [(0, hi)] * len(triples)
        for _ in solve(triples, self.store, {}, wild, ranges):
            return True
        return False

    def _old(self, triple: Triple, hi: int) -> bool:
        tid = self.store.index_of(triple)
        return tid is not None and tid < hi

    def run(self) -> Formula:
        prev = 0
        iteration = 0
        while True:
            cur = len(self.store)
            self.discover(prev, cur)
            if prev == cur and not self.fresh_rules:
                break
            iteration += 1
            if iteration > self.limits.max_iterations:
                raise ClosureLimitError(
                    f"no fixpoint after {self.limits.max_iterations} iterations", self.formula()
                )
            fresh = set(id(r) for r in self.fresh_rules)
            self.fresh_rules = []
            produced: List[Triple] = []
            for key in sorted(self.rules, key=triple_key):
                rule = self.rules[key]
                if id(rule) in fresh:
                    plans = [None]
                elif prev == cur:
                    continue
                else:
                    plans = self.plans(rule, prev, cur)
                for ranges in plans:
                    for b in rule.matches(self.store, ranges, self.ctx):
                        b = {k: v for k, v in b.items() if k in rule.antecedent_vars}
                        if not self.fired.check_and_add(key, b):
                            continue
                        if rule.flat is not None:
                            triples = [Triple(*(b.get(x, x) for x in tr)) for tr in rule.flat]
                            if not all(self._old(t, cur) for t in triples):
                                produced.extend(triples)
                            continue
                        if self.satisfied(rule, b, cur):
                            continue
                        triples, universals = rule.instantiate(b, self.fresh)
                        self.universals |= universals
                        produced.extend(triples)
            prev = cur
            for t in produced:
                if self.store.add(t):
                    self.derived += 1
                    if self.derived > self.limits.max_triples:
                        raise ClosureLimitError(
                            f"more than {self.limits.max_triples} derived triples", self.formula()
                        )
        return self.formula()

    @staticmethod
    def plans(rule: _CompiledRule, prev: int, cur: int) -> List[List[Tuple[int, int]]]:
        n = len(rule.graph)
        if n == 0:
            return []
        out = []
        for j in range(n):
            out.append([(0, prev)] * j + [(prev, cur)] + [(0, cur)] * (n - j - 1))
        return out


def _context(limits: EngineLimits, ctx: Optional[EvalContext]) -> EvalContext:
    if ctx is None:
        ctx = EvalContext(limits=limits)
    elif ctx.limits is None:
        ctx.limits = limits
    return ctx


def conclusion(f: Formula, limits: Optional[EngineLimits] = None, ctx: Optional[EvalContext] = None) -> Formula:
    """Deductive closure of ``f`` under the rules it states (and derives)."""
    limits = limits or EngineLimits()
    return _Closure(f, limits, _context(limits, ctx)).run()


def apply_rule(
    rule: Rule,
    kb: Formula,
    fired: Optional[FiringRecord] = None,
    limits: Optional[EngineLimits] = None,
    ctx: Optional[EvalContext] = None,
    key: object = None,
) -> Set[Triple]:
    """One modus-ponens step: consequent instances for every unfired match."""
    limits = limits or EngineLimits()
    ctx = _context(limits, ctx)
    fired = fired if fired is not None else FiringRecord()
    compiled = _CompiledRule(key, rule)
    store = kb.store()
    fresh = _fresh_factory(store)
    out: Set[Triple] = set()
    for b in compiled.matches(store, None, ctx):
        b = {k: v for k, v in b.items() if k in compiled.antecedent_vars}
        if not fired.check_and_add(key if key is not None else id(rule), b):
            continue
        triples, _ = compiled.instantiate(b, fresh)
        out.update(triples)
    return out


def supports(f: Formula, g: Formula, limits: Optional[EngineLimits] = None, ctx: Optional[EvalContext] = None) -> bool:
    return includes(conclusion(f, limits, ctx), g)


def filter(kb: Formula, rules: Formula, limits: Optional[EngineLimits] = None, ctx: Optional[EvalContext] = None) -> Formula:
    """Only the consequents the filter ``rules`` yield over the closure of kb and rules."""
    limits = limits or EngineLimits()
    ctx = _context(limits, ctx)
    diagnostics = ctx.diagnostics
    closed = conclusion(conjoin([kb, rules]), limits, ctx)
    out: Set[Triple] = set()
    universals: Set[str] = set()
    fired = FiringRecord()
    for key, rule in extract_rules(rules, diagnostics):
        out |= apply_rule(rule, closed, fired, limits, ctx, key=key)
        universals |= rule.consequent.universals
    return Formula(out, universals)
