"""list: membership and last element."""

from ..model import LIST, ListTerm
from . import CHECK, COMPUTE_OBJECT, COMPUTE_SUBJECT, Call, Defer, Unsatisfied, builtin


@builtin(LIST["in"], [CHECK, COMPUTE_SUBJECT])
def _in(call: Call):
    o = call.object
    if not isinstance(o, ListTerm) or not call.ground(o):
        raise Defer("list:in needs a ground list as object")
    return call.bind_each(call.subject, o.items)


@builtin(LIST.last, [COMPUTE_OBJECT, CHECK])
def _last(call: Call):
    s = call.subject
    if not isinstance(s, ListTerm) or not call.ground(s):
        raise Defer("list:last needs a ground list as subject")
    if not s.items:
        return Unsatisfied("empty list has no last element")
    return call.bind(call.object, s.items[-1])
