"""math: comparisons and arithmetic over numeric literals."""

from __future__ import annotations

import math
import re
from decimal import Decimal, InvalidOperation, localcontext
from fractions import Fraction
from typing import List, Union

from ..model import MATH, XSD_DECIMAL, XSD_DOUBLE, XSD_INTEGER, ListTerm, Literal, Term
from . import CHECK, COMPUTE_OBJECT, COMPUTE_SUBJECT, Call, Defer, Satisfied, Unsatisfied, builtin

Number = Union[int, Decimal, float]

# Width order used to type results: integer < decimal < double.
_RANK = {int: 0, Decimal: 1, float: 2}
_INT = re.compile(r"\s*[+-]?\d+\s*")
_DEC = re.compile(r"\s*[+-]?(\d+\.\d*|\.\d+)\s*")


def numeric_value(t: Term) -> Number:
    """Python value of a numeric literal; plain strings holding numbers count."""
    if not isinstance(t, Literal) or t.language:
        raise Defer(f"{t} is not a number")
    lex = t.lexical.strip()
    try:
        if t.datatype == XSD_INTEGER:
            return int(lex)
        if t.datatype == XSD_DECIMAL:
            return Decimal(lex)
        if t.datatype == XSD_DOUBLE:
            return float({"INF": "inf", "-INF": "-inf"}.get(lex, lex))
        if t.datatype is None:
            if _INT.fullmatch(lex):
                return int(lex)
            if _DEC.fullmatch(lex):
                return Decimal(lex)
            return float(lex)
    except (ValueError, InvalidOperation):
        pass
    raise Defer(f"{t} is not a number")


def _exact(x: Number) -> Fraction:
    return Fraction(x)


def compare(a: Number, b: Number) -> int:
    if isinstance(a, float) and math.isnan(a) or isinstance(b, float) and math.isnan(b):
        raise Defer("NaN is not comparable")
    if isinstance(a, float) and math.isinf(a) or isinstance(b, float) and math.isinf(b):
        fa, fb = float(a), float(b)
        return (fa > fb) - (fa < fb)
    fa, fb = _exact(a), _exact(b)
    return (fa > fb) - (fa < fb)


def _widest(values: List[Number]) -> type:
    return max((type(v) for v in values), key=_RANK.__getitem__, default=int)


def _coerce(x: Number, kind: type) -> Number:
    if kind is float:
        return float(x)
    if kind is Decimal:
        return x if isinstance(x, Decimal) else Decimal(x)
    return x


def format_decimal(d: Decimal) -> str:
    text = format(d.normalize() if d == d.to_integral_value() else d, "f")
    if "." not in text:
        text += ".0"
    return text


def format_double(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "INF" if x > 0 else "-INF"
    text = repr(x)
    if "e" in text:
        mant, exp = text.split("e")
        if "." not in mant:
            mant += ".0"
        return f"{mant}E{int(exp)}"
    return text + "E0"


def number_literal(x: Number) -> Literal:
    if isinstance(x, bool):
        x = int(x)
    if isinstance(x, int):
        return Literal(str(x), XSD_INTEGER)
    if isinstance(x, Decimal):
        return Literal(format_decimal(x), XSD_DECIMAL)
    return Literal(format_double(x), XSD_DOUBLE)


def _operands(call: Call) -> List[Number]:
    s = call.subject
    if not isinstance(s, ListTerm) or not call.ground(s):
        raise Defer("subject must be a ground list of numbers")
    return [numeric_value(i) for i in s.items]


def _result(call: Call, target: Term, value: Number):
    """Bind ``target`` to ``value``; a ground numeric target is compared by value."""
    if call.ground(target):
        try:
            return Satisfied() if compare(numeric_value(target), value) == 0 else Unsatisfied("value differs")
        except Defer:
            return Unsatisfied(f"{target} is not a number")
    return call.bind(target, number_literal(value))


# -- comparisons ---------------------------------------------------------------

def _comparison(name: str, test):
    @builtin(MATH[name], [CHECK])
    def check(call: Call):
        if not (call.ground(call.subject) and call.ground(call.object)):
            raise Defer("comparison needs both sides bound")
        c = compare(numeric_value(call.subject), numeric_value(call.object))
        return Satisfied() if test(c) else Unsatisfied(f"{name} does not hold")

    return check


_comparison("lessThan", lambda c: c < 0)
_comparison("greaterThan", lambda c: c > 0)
_comparison("notLessThan", lambda c: c >= 0)
_comparison("notGreaterThan", lambda c: c <= 0)
_comparison("equalTo", lambda c: c == 0)
_comparison("notEqualTo", lambda c: c != 0)


# -- n-ary arithmetic -------------------------------------------------------------

def _fold(values: List[Number], op) -> Number:
    kind = _widest(values)
    vals = [_coerce(v, kind) for v in values]
    acc = vals[0]
    for v in vals[1:]:
        acc = op(acc, v)
    return acc


@builtin(MATH.sum, [COMPUTE_OBJECT, CHECK], shape="list")
def _sum(call: Call):
    values = _operands(call)
    return _result(call, call.object, _fold(values, lambda a, b: a + b) if values else 0)


@builtin(MATH.product, [COMPUTE_OBJECT, CHECK], shape="list")
def _product(call: Call):
    values = _operands(call)
    return _result(call, call.object, _fold(values, lambda a, b: a * b) if values else 1)


@builtin(MATH.difference, [COMPUTE_OBJECT, CHECK], shape="list")
def _difference(call: Call):
    values = _operands(call)
    if len(values) != 2:
        raise Defer("difference takes a list of two numbers")
    return _result(call, call.object, _fold(values, lambda a, b: a - b))


def quotient(a: Number, b: Number) -> Number:
    kind = _widest([a, b])
    if kind is float:
        return float(a) / float(b)
    if kind is int:
        if a % b == 0:
            return a // b
        kind = Decimal
    with localcontext() as ctx:
        ctx.prec = 28
        return _coerce(a, Decimal) / _coerce(b, Decimal)


@builtin(MATH.quotient, [COMPUTE_OBJECT, CHECK], shape="list")
def _quotient(call: Call):
    values = _operands(call)
    if len(values) != 2:
        raise Defer("quotient takes a list of two numbers")
    a, b = values
    if b == 0:
        call.ctx.note(f"math:quotient: division by zero in {call.subject}")
        return Unsatisfied("division by zero")
    return _result(call, call.object, quotient(a, b))


# -- unary ------------------------------------------------------------------------

@builtin(MATH.negation, [COMPUTE_OBJECT, COMPUTE_SUBJECT, CHECK])
def _negation(call: Call):
    if call.ground(call.subject):
        return _result(call, call.object, -numeric_value(call.subject))
    if call.ground(call.object):
        return _result(call, call.subject, -numeric_value(call.object))
    raise Defer("negation needs one side bound")


@builtin(MATH.absoluteValue, [COMPUTE_OBJECT, CHECK])
def _absolute(call: Call):
    if not call.ground(call.subject):
        raise Defer("absoluteValue needs its subject")
    return _result(call, call.object, abs(numeric_value(call.subject)))


@builtin(MATH.cos, [COMPUTE_OBJECT, CHECK])
def _cos(call: Call):
    if not call.ground(call.subject):
        raise Defer("cos needs its subject")
    return _result(call, call.object, math.cos(float(numeric_value(call.subject))))
