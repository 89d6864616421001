"""log: formulas as values, documents on the Web, and reasoning over them."""

from __future__ import annotations

from typing import Set

from ..errors import ClosureLimitError, ParseError, WebAccessError
from ..model import LOG, Formula, Iri, ListTerm, Literal, Quoted, Term, conjoin
from . import CHECK, COMPUTE_OBJECT, COMPUTE_SUBJECT, Call, Defer, Satisfied, Unsatisfied, builtin, free_terms


def _formula(call: Call, t: Term, role: str) -> Formula:
    if not isinstance(t, Quoted) or not call.ground(t):
        raise Defer(f"{role} must be a bound formula")
    return t.formula


def _iri(call: Call, t: Term) -> str:
    if not isinstance(t, Iri):
        raise Defer("subject must be a bound IRI")
    return t.value


def _free_in(call: Call, t: Term) -> Set[Term]:
    return free_terms(t, call.variables)


# -- documents --------------------------------------------------------------------

@builtin(LOG.semantics, [COMPUTE_OBJECT, CHECK], pure=False)
def _semantics(call: Call):
    iri = _iri(call, call.subject)
    try:
        f = call.ctx.semantics(iri)
    except WebAccessError as exc:
        call.ctx.note(f"log:semantics {iri}: {exc}")
        return Unsatisfied(str(exc))
    return call.bind(call.object, Quoted(f))


@builtin(LOG.content, [COMPUTE_OBJECT, CHECK], pure=False)
def _content(call: Call):
    iri = _iri(call, call.subject)
    if call.ctx.resolver is None:
        from ..web import Resolver

        call.ctx.resolver = Resolver()
    try:
        doc = call.ctx.resolver.dereference(iri)
    except WebAccessError as exc:
        call.ctx.note(f"log:content {iri}: {exc}")
        return Unsatisfied(str(exc))
    return call.bind(call.object, Literal(doc.body))


@builtin(LOG.parsedAsN3, [COMPUTE_OBJECT, CHECK])
def _parsed_as_n3(call: Call):
    from ..parser import parse_document

    s = call.subject
    if not isinstance(s, Literal):
        raise Defer("log:parsedAsN3 needs a string subject")
    try:
        f = parse_document(s.lexical, base=call.ctx.base or "file:///dev/stdin", source="<log:parsedAsN3>")
    except ParseError as exc:
        call.ctx.note(f"log:parsedAsN3: {exc.diagnostic()}")
        return Unsatisfied(str(exc))
    return call.bind(call.object, Quoted(f))


@builtin(LOG.N3String, [COMPUTE_OBJECT, CHECK])
def _n3_string(call: Call):
    from ..serializer import canonical_text

    f = _formula(call, call.subject, "subject")
    return call.bind(call.object, Literal(canonical_text(f, call.ctx.prefixes)))


@builtin(LOG.uri, [COMPUTE_OBJECT, COMPUTE_SUBJECT, CHECK])
def _uri(call: Call):
    s, o = call.subject, call.object
    if isinstance(s, Iri):
        return call.bind(o, Literal(s.value))
    if isinstance(o, Literal) and call.is_var(s):
        return call.bind(s, Iri(o.lexical))
    if call.ground(s) and call.ground(o):
        return Unsatisfied("subject is not an IRI")
    raise Defer("log:uri needs one side bound")


# -- formulas ---------------------------------------------------------------------

@builtin(LOG.conjunction, [COMPUTE_OBJECT, CHECK], shape="list")
def _conjunction(call: Call):
    s = call.subject
    if not isinstance(s, ListTerm) or not call.ground(s):
        raise Defer("log:conjunction needs a ground list of formulas")
    parts = []
    for item in s.items:
        if not isinstance(item, Quoted):
            raise Defer("log:conjunction members must be formulas")
        parts.append(item.formula)
    return call.bind(call.object, Quoted(conjoin(parts)))


def _witness_outcome(call: Call, data: Formula):
    from ..engine import witnesses

    pattern = call.object
    if not isinstance(pattern, Quoted):
        raise Defer("object must be a formula")
    found = witnesses(data, pattern.formula, _free_in(call, pattern))
    return Satisfied(tuple(found)) if found else Unsatisfied("not included")


@builtin(LOG.includes, [CHECK, COMPUTE_OBJECT])
def _includes(call: Call):
    return _witness_outcome(call, _formula(call, call.subject, "subject"))


@builtin(LOG.notIncludes, [CHECK])
def _not_includes(call: Call):
    from ..engine import witnesses

    data = _formula(call, call.subject, "subject")
    pattern = call.object
    if not isinstance(pattern, Quoted):
        raise Defer("object must be a formula")
    # Unbound variables act as wildcards: nothing is exported from a negation.
    wild = _free_in(call, pattern)
    found = witnesses(data, pattern.formula, set(), wildcards=wild)
    return Unsatisfied("included") if found else Satisfied()


def _closure(call: Call, f: Formula):
    from ..engine import conclusion

    try:
        return conclusion(f, call.ctx.limits, ctx=call.ctx)
    except ClosureLimitError as exc:
        call.ctx.note(f"log:conclusion: {exc}")
        return None


@builtin(LOG.conclusion, [COMPUTE_OBJECT, CHECK])
def _conclusion(call: Call):
    closed = _closure(call, _formula(call, call.subject, "subject"))
    if closed is None:
        return Unsatisfied("closure limit reached")
    return call.bind(call.object, Quoted(closed))


@builtin(LOG.supports, [CHECK, COMPUTE_OBJECT])
def _supports(call: Call):
    closed = _closure(call, _formula(call, call.subject, "subject"))
    if closed is None:
        return Unsatisfied("closure limit reached")
    return _witness_outcome(call, closed)
