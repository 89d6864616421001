"""string: predicates over literal lexical forms.

Regular expressions use Python's ``re`` dialect. ``string:matches`` must
match the whole subject; ``string:scrape`` searches and returns the first
capture group (or the whole match when the pattern has no group).
"""

from __future__ import annotations

import re

from ..model import STRING, Iri, ListTerm, Literal, Term
from . import CHECK, COMPUTE_OBJECT, Call, Defer, NotEvaluable, Satisfied, Unsatisfied, builtin


def text_of(t: Term) -> str:
    if isinstance(t, Literal):
        return t.lexical
    raise Defer(f"{t} is not a string")


def _pair(call: Call):
    if not (call.ground(call.subject) and call.ground(call.object)):
        raise Defer("both sides must be bound")
    return text_of(call.subject), text_of(call.object)


def _check(name: str, test):
    @builtin(STRING[name], [CHECK])
    def check(call: Call):
        a, b = _pair(call)
        return Satisfied() if test(a, b) else Unsatisfied(f"string:{name} does not hold")

    return check


_check("contains", lambda a, b: b in a)
_check("containsIgnoringCase", lambda a, b: b.casefold() in a.casefold())
_check("startsWith", lambda a, b: a.startswith(b))
_check("endsWith", lambda a, b: a.endswith(b))


def _compile(call: Call, pattern: str):
    try:
        return re.compile(pattern)
    except re.error as exc:
        call.ctx.note(f"invalid regular expression {pattern!r}: {exc}")
        return None


@builtin(STRING.matches, [CHECK])
def _matches(call: Call):
    text, pattern = _pair(call)
    rx = _compile(call, pattern)
    if rx is None:
        return NotEvaluable(f"invalid regular expression {pattern!r}")
    return Satisfied() if rx.fullmatch(text) else Unsatisfied("no match")


@builtin(STRING.concatenation, [COMPUTE_OBJECT, CHECK], shape="list")
def _concatenation(call: Call):
    s = call.subject
    if not isinstance(s, ListTerm) or not call.ground(s):
        raise Defer("concatenation needs a ground list")
    parts = []
    for item in s.items:
        if isinstance(item, Iri):
            parts.append(item.value)
        else:
            parts.append(text_of(item))
    return call.bind(call.object, Literal("".join(parts)))


@builtin(STRING.scrape, [COMPUTE_OBJECT, CHECK], shape="list")
def _scrape(call: Call):
    s = call.subject
    if not isinstance(s, ListTerm) or len(s.items) != 2 or not call.ground(s):
        raise Defer("scrape needs a ground (string pattern) list")
    text, pattern = text_of(s.items[0]), text_of(s.items[1])
    rx = _compile(call, pattern)
    if rx is None:
        return NotEvaluable(f"invalid regular expression {pattern!r}")
    m = rx.search(text)
    if m is None:
        return Unsatisfied("no match")
    value = m.group(1) if rx.groups else m.group(0)
    if value is None:
        return Unsatisfied("capture group did not participate")
    return call.bind(call.object, Literal(value))
