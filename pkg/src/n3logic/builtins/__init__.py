"""Registry and evaluation of built-in (calculable) predicates.

A builtin is looked up by predicate IRI. Its evaluator receives the subject
and object with the current bindings already substituted, and reports one of
three outcomes: satisfied (with one or more binding extensions), unsatisfied,
or not evaluable yet because required arguments are still unbound.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Set, Tuple, Union

from ..matching import unify
from ..model import (
    Bindings,
    ExiVar,
    Formula,
    Iri,
    ListTerm,
    Quoted,
    Term,
    UniVar,
    substitute_term,
)

CHECK = "check"
COMPUTE_OBJECT = "compute-object"
COMPUTE_SUBJECT = "compute-subject"


@dataclass(frozen=True)
class Satisfied:
    alternatives: Tuple[Bindings, ...] = ({},)


@dataclass(frozen=True)
class Unsatisfied:
    reason: str = ""


@dataclass(frozen=True)
class NotEvaluable:
    reason: str = ""


EvalOutcome = Union[Satisfied, Unsatisfied, NotEvaluable]


class Defer(Exception):
    """Raised by evaluators when an argument they need is unbound or ill-typed."""


@dataclass(frozen=True)
class BuiltinSignature:
    predicate: Iri
    modes: Tuple[str, ...]
    shape: str
    fn: Callable[["Call"], EvalOutcome]
    pure: bool = True


@dataclass
class EvalContext:
    """Everything an evaluation may depend on besides its arguments."""

    resolver: object = None
    limits: object = None
    base: Optional[str] = None
    prefixes: Mapping[str, str] = field(default_factory=dict)
    environ: Optional[Mapping[str, str]] = None
    argv: Sequence[str] = ()
    clock: Callable[[], float] = time.time
    local_tz: object = None
    allow_impure: bool = True
    memo: Dict[str, Formula] = field(default_factory=dict)
    diagnostics: List[str] = field(default_factory=list)

    def env(self) -> Mapping[str, str]:
        return os.environ if self.environ is None else self.environ

    def note(self, message: str) -> None:
        self.diagnostics.append(message)

    def semantics(self, iri: str) -> Formula:
        """Parsed formula of a document, memoized for the life of this context."""
        key = iri.split("#", 1)[0]
        if key not in self.memo:
            if self.resolver is None:
                from ..web import Resolver

                self.resolver = Resolver()
            self.memo[key] = self.resolver.semantics(key)
        return self.memo[key]


class Call:
    """One builtin evaluation: substituted arguments plus the variables
    that remain unbound in them."""

    __slots__ = ("subject", "object", "variables", "ctx")

    def __init__(self, subject: Term, obj: Term, variables: Set[Term], ctx: EvalContext):
        self.subject = subject
        self.object = obj
        self.variables = variables
        self.ctx = ctx

    def ground(self, t: Term) -> bool:
        return not self.variables or not free_terms(t, self.variables)

    def is_var(self, t: Term) -> bool:
        return t in self.variables

    def bind(self, pattern: Term, value: Term) -> EvalOutcome:
        alts = list(unify(pattern, value, {}, self.variables))
        return Satisfied(tuple(alts)) if alts else Unsatisfied(f"{value} does not match {pattern}")

    def bind_each(self, pattern: Term, values: Iterable[Term]) -> EvalOutcome:
        alts: List[Bindings] = []
        seen = set()
        for v in values:
            for b in unify(pattern, v, {}, self.variables):
                key = frozenset(b.items())
                if key not in seen:
                    seen.add(key)
                    alts.append(b)
        return Satisfied(tuple(alts)) if alts else Unsatisfied("no value matched")


REGISTRY: Dict[Iri, BuiltinSignature] = {}


def builtin(predicate: Iri, modes: Sequence[str], shape: str = "scalar", pure: bool = True):
    def register(fn: Callable[[Call], EvalOutcome]):
        REGISTRY[predicate] = BuiltinSignature(predicate, tuple(modes), shape, fn, pure)
        return fn

    return register


def is_builtin(predicate: Term) -> bool:
    return predicate in REGISTRY


def free_terms(t: Term, variables: Optional[Set[Term]] = None) -> Set[Term]:
    """Variables occurring free in ``t``.

    A universal quantified by a quoted formula is local to it, even when a
    variable of the same name is free outside. With ``variables`` given,
    only those count; otherwise every free universal and every existential
    outside quoted formulas does.
    """
    found: Set[Term] = set()

    def walk(x: Term, bound: frozenset, quoted: bool) -> None:
        kind = type(x)
        if kind is ListTerm:
            for item in x.items:
                walk(item, bound, quoted)
        elif kind is Quoted:
            inner = bound | x.formula.universals
            for triple in x.formula.triples:
                for y in triple:
                    walk(y, inner, True)
        elif variables is not None:
            if x in variables and not (kind is UniVar and x.name in bound):
                found.add(x)
        elif kind is UniVar:
            if x.name not in bound:
                found.add(x)
        elif kind is ExiVar and not quoted:
            found.add(x)

    walk(t, frozenset(), False)
    return found


def evaluate(
    predicate: Term,
    subject: Term,
    object: Term,
    b: Optional[Bindings] = None,
    ctx: Optional[EvalContext] = None,
    variables: Optional[Set[Term]] = None,
) -> EvalOutcome:
    """Evaluate one builtin triple under bindings ``b``.

    Satisfied alternatives are full binding dicts extending ``b``. When
    ``variables`` is omitted, universals and existentials in the arguments
    count as unbound variables.
    """
    b = dict(b or {})
    ctx = ctx or EvalContext()
    sig = REGISTRY.get(predicate)
    if sig is None:
        return NotEvaluable(f"{predicate} is not a registered builtin")
    if not sig.pure and not ctx.allow_impure:
        return NotEvaluable(f"{predicate} needs the environment, which this context withholds")
    s = substitute_term(subject, b)
    o = substitute_term(object, b)
    if variables is None:
        free = free_terms(s) | free_terms(o)
    else:
        free = {v for v in variables if v not in b}
    try:
        outcome = sig.fn(Call(s, o, free, ctx))
    except Defer as exc:
        return NotEvaluable(str(exc) or "arguments not bound")
    if isinstance(outcome, Satisfied):
        merged = []
        for alt in outcome.alternatives:
            nb = dict(b)
            nb.update(alt)
            merged.append(nb)
        return Satisfied(tuple(merged))
    return outcome


def catalog_entries() -> List[Tuple[str, Tuple[str, ...], str, bool]]:
    return sorted((sig.predicate.value, sig.modes, sig.shape, sig.pure) for sig in REGISTRY.values())


from . import arith, crypto, lists, logmeta, osfns, strings, timefns  # noqa: E402,F401
