import json
from decimal import Decimal
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from n3logic.builtins import (
    CHECK,
    COMPUTE_OBJECT,
    REGISTRY,
    EvalContext,
    NotEvaluable,
    Satisfied,
    Unsatisfied,
    catalog_entries,
    evaluate,
    is_builtin,
)
from n3logic.builtins.arith import format_double, numeric_value, quotient
from n3logic.builtins.osfns import relativize
from n3logic.builtins.timefns import parse_datetime
from n3logic.model import (
    CRYPTO,
    LIST,
    LOG,
    MATH,
    OS,
    STRING,
    TIME,
    XSD_DECIMAL,
    XSD_DOUBLE,
    XSD_INTEGER,
    Formula,
    Iri,
    ListTerm,
    Literal,
    Quoted,
    Triple,
    UniVar,
)

from conftest import FIXTURES, n3
from oracles import md5_hex, sha1_hex

X, Y = UniVar("x"), UniVar("y")


def num(n):
    if isinstance(n, int):
        return Literal(str(n), XSD_INTEGER)
    return Literal(str(n), XSD_DECIMAL)


def lst(*items):
    return ListTerm(tuple(num(i) if isinstance(i, (int, Decimal)) else i for i in items))


def value(outcome, var=X):
    assert isinstance(outcome, Satisfied), outcome
    (b,) = outcome.alternatives
    return b[var]


def holds(pred, s, o, **kw):
    return isinstance(evaluate(pred, s, o, **kw), Satisfied)


# -- registry ------------------------------------------------------------------

def test_registry_covers_named_vocabulary():
    names = {sig.predicate.value.rsplit("#", 1)[1] for sig in REGISTRY.values()}
    for n in ("conclusion", "content", "includes", "semantics", "notIncludes", "supports", "md5",
              "in", "last", "lessThan", "greaterThan", "argv", "environ", "contains", "endsWith",
              "scrape", "day", "hour", "minute", "sha1"):
        assert n in names, n


def test_catalog_entries_shape():
    rows = catalog_entries()
    assert rows == sorted(rows)
    iri, modes, shape, pure = rows[0]
    assert iri.startswith("http://www.w3.org/2000/10/swap/")
    assert set(modes) <= {CHECK, COMPUTE_OBJECT, "compute-subject"}
    assert shape in ("scalar", "list")


def test_unregistered_predicate_not_evaluable():
    assert not is_builtin(Iri("http://example.org/#p"))
    assert isinstance(evaluate(Iri("http://example.org/#p"), X, Y), NotEvaluable)


# -- math ---------------------------------------------------------------------

@pytest.mark.parametrize(
    "pred, a, b, expected",
    [
        (MATH.lessThan, 1, 2, True),
        (MATH.lessThan, 2, 2, False),
        (MATH.greaterThan, 3, 2, True),
        (MATH.notLessThan, 2, 2, True),
        (MATH.notGreaterThan, 6, 6, True),
        (MATH.notGreaterThan, 7, 6, False),
        (MATH.equalTo, 2, Decimal("2.0"), True),
        (MATH.notEqualTo, 2, 3, True),
    ],
)
def test_comparisons(pred, a, b, expected):
    assert holds(pred, num(a), num(b)) is expected


def test_comparison_mixed_types_exact():
    # 0.1 as a double is not exactly one tenth; the decimal is.
    assert holds(MATH.notEqualTo, Literal("0.1", XSD_DOUBLE), Literal("0.1", XSD_DECIMAL))
    assert holds(MATH.lessThan, Literal("5"), num(10))  # plain numeric string


def test_comparison_needs_bound_arguments():
    assert isinstance(evaluate(MATH.lessThan, X, num(1)), NotEvaluable)


def test_comparison_on_non_number_not_evaluable():
    assert isinstance(evaluate(MATH.lessThan, Literal("abc"), num(1)), NotEvaluable)


def test_sum_product_difference():
    assert value(evaluate(MATH.sum, lst(1, 2, 3), X)) == num(6)
    assert value(evaluate(MATH.product, lst(2, Decimal("1.5")), X)) == Literal("3.0", XSD_DECIMAL)
    assert value(evaluate(MATH.difference, lst(10, 4), X)) == num(6)
    assert value(evaluate(MATH.sum, lst(), X)) == num(0)


def test_sum_check_mode_compares_by_value():
    assert holds(MATH.sum, lst(1, 2), Literal("3.0", XSD_DECIMAL))
    assert not holds(MATH.sum, lst(1, 2), num(4))


def test_quotient_typing_and_zero():
    assert value(evaluate(MATH.quotient, lst(6, 3), X)) == num(2)
    assert value(evaluate(MATH.quotient, lst(1, 4), X)) == Literal("0.25", XSD_DECIMAL)
    ctx = EvalContext()
    assert isinstance(evaluate(MATH.quotient, lst(1, 0), X, ctx=ctx), Unsatisfied)
    assert "division by zero" in ctx.diagnostics[0]


def test_negation_both_directions():
    assert value(evaluate(MATH.negation, num(5), X)) == num(-5)
    assert value(evaluate(MATH.negation, X, num(5))) == num(-5)
    assert isinstance(evaluate(MATH.negation, X, Y), NotEvaluable)


def test_absolute_value_and_cos():
    assert value(evaluate(MATH.absoluteValue, num(-3), X)) == num(3)
    assert value(evaluate(MATH.cos, num(0), X)) == Literal("1.0E0", XSD_DOUBLE)


def test_format_double():
    assert format_double(1.5) == "1.5E0"
    assert format_double(1e20) == "1.0E20"
    assert format_double(float("inf")) == "INF"


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(-10**6, 10**6), max_size=5))
def test_sum_and_product_agree_with_python(xs):
    assert numeric_value(value(evaluate(MATH.sum, lst(*xs), X))) == sum(xs)
    prod = 1
    for x in xs:
        prod *= x
    assert numeric_value(value(evaluate(MATH.product, lst(*xs), X))) == prod


@settings(max_examples=200, deadline=None)
@given(st.integers(-1000, 1000), st.integers(-1000, 1000).filter(bool))
def test_quotient_is_exact_for_integers(a, b):
    q = quotient(a, b)
    assert Fraction(q) == Fraction(a, b) or abs(Fraction(q) - Fraction(a, b)) < Fraction(1, 10**20)


@settings(max_examples=200, deadline=None)
@given(st.decimals(-1000, 1000, places=3), st.decimals(-1000, 1000, places=3))
def test_comparisons_are_consistent(a, b):
    lt = holds(MATH.lessThan, num(a), num(b))
    gt = holds(MATH.greaterThan, num(a), num(b))
    eq = holds(MATH.equalTo, num(a), num(b))
    assert [lt, eq, gt].count(True) == 1
    assert holds(MATH.notGreaterThan, num(a), num(b)) == (lt or eq)
    assert lt == (a < b)


# -- strings --------------------------------------------------------------------

def test_string_checks():
    s = Literal("Semantic Web")
    assert holds(STRING.contains, s, Literal("tic W"))
    assert holds(STRING.containsIgnoringCase, s, Literal("WEB"))
    assert holds(STRING.startsWith, s, Literal("Sem"))
    assert holds(STRING.endsWith, s, Literal("Web"))
    assert not holds(STRING.endsWith, s, Literal("web"))


def test_string_matches_whole_subject():
    assert holds(STRING.matches, Literal("abc123"), Literal("[a-z]+[0-9]+"))
    assert not holds(STRING.matches, Literal("abc123x"), Literal("[a-z]+[0-9]+"))
    assert isinstance(evaluate(STRING.matches, Literal("a"), Literal("(")), NotEvaluable)


def test_concatenation_and_scrape():
    out = value(evaluate(STRING.concatenation, ListTerm((Literal("a"), num(1), Iri("http://x/"))), X))
    assert out == Literal("a1http://x/")
    assert value(evaluate(STRING.scrape, ListTerm((Literal("id=42;"), Literal("id=([0-9]+)"))), X)) == Literal("42")
    assert isinstance(evaluate(STRING.scrape, ListTerm((Literal("x"), Literal("y"))), X), Unsatisfied)


# -- lists ---------------------------------------------------------------------

def test_list_in_and_last():
    items = lst(1, 2, 3)
    assert holds(LIST["in"], num(2), items)
    assert not holds(LIST["in"], num(5), items)
    out = evaluate(LIST["in"], X, items)
    assert [b[X] for b in out.alternatives] == [num(1), num(2), num(3)]
    assert value(evaluate(LIST.last, items, X)) == num(3)
    assert isinstance(evaluate(LIST.last, lst(), X), Unsatisfied)


# -- crypto --------------------------------------------------------------------

def test_crypto_digests_match_frozen_vectors():
    vectors = json.loads((FIXTURES / "digest_vectors.json").read_text(encoding="utf-8"))
    assert len(vectors) == 20
    for v in vectors:
        assert value(evaluate(CRYPTO.md5, Literal(v["input"]), X)) == Literal(v["md5"])
        assert value(evaluate(CRYPTO.sha1, Literal(v["input"]), X)) == Literal(v["sha1"])


def test_frozen_vectors_agree_with_independent_oracle():
    vectors = json.loads((FIXTURES / "digest_vectors.json").read_text(encoding="utf-8"))
    for v in vectors:
        data = v["input"].encode("utf-8")
        assert (md5_hex(data), sha1_hex(data)) == (v["md5"], v["sha1"])


def test_published_digest_values():
    # RFC 1321 appendix A.5 and FIPS 180-1 appendix A.
    assert md5_hex(b"") == "d41d8cd98f00b204e9800998ecf8427e"
    assert md5_hex(b"message digest") == "f96b697d7cb7938d525a2f31aaf161d0"
    assert md5_hex(b"1234567890" * 8) == "57edf4a22be3c955ac49da2e2107b67a"
    assert sha1_hex(b"abc") == "a9993e364706816aba3e25717850c26c9cd0d89d"
    assert sha1_hex(b"abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq") == (
        "84983e441c3bd26ebaae4aa1f95129e5e54670f1"
    )


def test_crypto_check_mode_and_deferral():
    assert holds(CRYPTO.md5, Literal("abc"), Literal("900150983cd24fb0d6963f7d28e17f72"))
    assert not holds(CRYPTO.md5, Literal("abd"), Literal("900150983cd24fb0d6963f7d28e17f72"))
    assert isinstance(evaluate(CRYPTO.sha1, X, Y), NotEvaluable)


@settings(max_examples=200, deadline=None)
@given(st.text(max_size=80))
def test_digests_agree_with_oracle(s):
    assert value(evaluate(CRYPTO.md5, Literal(s), X)).lexical == md5_hex(s.encode("utf-8"))
    assert value(evaluate(CRYPTO.sha1, Literal(s), X)).lexical == sha1_hex(s.encode("utf-8"))


# -- time ----------------------------------------------------------------------

def test_time_extractors():
    t = Literal("2006-05-23T09:05:07Z")
    got = {name: value(evaluate(TIME[name], t, X)).lexical for name in ("year", "month", "day", "hour", "minute", "second")}
    assert got == {"year": "2006", "month": "05", "day": "23", "hour": "09", "minute": "05", "second": "07"}
    assert value(evaluate(TIME.dayOfWeek, t, X)).lexical == "2"  # a Tuesday


def test_time_bad_input_not_evaluable():
    assert isinstance(evaluate(TIME.day, Literal("yesterday"), X), NotEvaluable)


def test_parse_datetime_variants():
    assert parse_datetime("2006-05-23").day == 23
    assert parse_datetime("2006-05-23T10:00:00+02:00").utcoffset().total_seconds() == 7200


def test_gm_time_uses_context_clock():
    ctx = EvalContext(clock=lambda: 0.0)
    assert value(evaluate(TIME.gmTime, Literal(""), X, ctx=ctx)) == Literal("1970-01-01T00:00:00Z")
    assert value(evaluate(TIME.gmTime, num(86400), X, ctx=ctx)) == Literal("1970-01-02T00:00:00Z")


def test_impure_builtins_can_be_withheld():
    ctx = EvalContext(allow_impure=False)
    assert isinstance(evaluate(TIME.gmTime, Literal(""), X, ctx=ctx), NotEvaluable)
    assert isinstance(evaluate(OS.environ, Literal("HOME"), X, ctx=ctx), NotEvaluable)


# -- os ------------------------------------------------------------------------

def test_environ_and_argv():
    ctx = EvalContext(environ={"GREETING": "hi"}, argv=["first.n3", "second.n3"])
    assert value(evaluate(OS.environ, Literal("GREETING"), X, ctx=ctx)) == Literal("hi")
    assert isinstance(evaluate(OS.environ, Literal("MISSING"), X, ctx=ctx), Unsatisfied)
    assert value(evaluate(OS.argv, Literal("2"), X, ctx=ctx)) == Literal("second.n3")
    assert isinstance(evaluate(OS.argv, Literal("3"), X, ctx=ctx), Unsatisfied)


def test_base_absolute_and_relative():
    ctx = EvalContext(base="http://example.org/a/b.n3")
    assert value(evaluate(OS.baseAbsolute, Literal("c.n3"), X, ctx=ctx)) == Literal("http://example.org/a/c.n3")
    assert value(evaluate(OS.baseRelative, Literal("http://example.org/a/d/e.n3"), X, ctx=ctx)) == Literal("d/e.n3")
    assert relativize("http://other.org/x", "http://example.org/") == "http://other.org/x"


# -- log -----------------------------------------------------------------------

def q(text):
    return Quoted(n3(text))


def test_log_includes_and_not_includes():
    data = q(":a :p :b . :b :p :c .")
    assert holds(LOG.includes, data, q(":a :p :b ."))
    assert holds(LOG.notIncludes, data, q(":a :p :c ."))
    assert not holds(LOG.notIncludes, data, q(":a :p :b ."))


def test_log_includes_binds_variables():
    data = q(":a :p :b . :c :p :d .")
    pattern = Quoted(Formula([Triple(X, Iri("http://example.org/#p"), Iri("http://example.org/#d"))]))
    assert value(evaluate(LOG.includes, data, pattern)) == Iri("http://example.org/#c")


def test_log_not_includes_treats_unbound_as_wildcard():
    data = q(":a :p :b .")
    pattern = Quoted(Formula([Triple(X, Iri("http://example.org/#p"), Iri("http://example.org/#b"))]))
    assert not holds(LOG.notIncludes, data, pattern)


def test_log_conjunction_conclusion_supports():
    rules = q("{ ?x :p ?y } => { ?y :p ?x } .")
    facts = q(":a :p :b .")
    both = value(evaluate(LOG.conjunction, ListTerm((facts, rules)), X))
    assert len(both.formula) == 2
    closed = value(evaluate(LOG.conclusion, both, X))
    assert Triple(Iri("http://example.org/#b"), Iri("http://example.org/#p"), Iri("http://example.org/#a")) in closed.formula
    assert holds(LOG.supports, both, q(":b :p :a ."))
    assert not holds(LOG.supports, facts, q(":b :p :a ."))


def test_log_conclusion_limit_is_unsatisfied():
    from n3logic.engine import EngineLimits

    ctx = EvalContext(limits=EngineLimits(max_iterations=5))
    loop = q(":a :p :b . { ?x :p ?y } => { ?y :p [] } .")
    assert isinstance(evaluate(LOG.conclusion, loop, X, ctx=ctx), Unsatisfied)
    assert ctx.diagnostics


def test_log_uri_both_ways():
    assert value(evaluate(LOG.uri, Iri("http://example.org/"), X)) == Literal("http://example.org/")
    assert value(evaluate(LOG.uri, X, Literal("http://example.org/"))) == Iri("http://example.org/")


def test_log_parsed_as_n3_and_n3_string():
    f = value(evaluate(LOG.parsedAsN3, Literal("@prefix : <http://e/#> . :a :b :c ."), X))
    assert len(f.formula) == 1
    text = value(evaluate(LOG.N3String, f, X))
    assert "<http://e/#a>" in text.lexical
    ctx = EvalContext()
    assert isinstance(evaluate(LOG.parsedAsN3, Literal(":a :b"), X, ctx=ctx), Unsatisfied)
    assert "log:parsedAsN3" in ctx.diagnostics[0]


def test_log_semantics_and_content_from_fixtures(tmp_path):
    from n3logic.web import Resolver, ResolverConfig

    doc = tmp_path / "doc.n3"
    doc.write_text("@prefix : <http://e/#> . :a :b :c .")
    resolver = Resolver(ResolverConfig(allow_network=False, fixtures={"http://e/doc": str(doc)}))
    ctx = EvalContext(resolver=resolver)
    f = value(evaluate(LOG.semantics, Iri("http://e/doc#frag"), X, ctx=ctx))
    assert len(f.formula) == 1
    assert ":a :b :c" in value(evaluate(LOG.content, Iri("http://e/doc"), X, ctx=ctx)).lexical
    missing = evaluate(LOG.semantics, Iri("http://e/nothing"), X, ctx=ctx)
    assert isinstance(missing, Unsatisfied)
