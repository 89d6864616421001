import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from n3logic.canon import canonical_mapping
from n3logic.model import (
    Blank,
    ExiVar,
    Formula,
    Iri,
    ListTerm,
    Literal,
    Quoted,
    Triple,
    UniVar,
    conjoin,
    isomorphic,
    rename_apart,
    rewrite_equals,
    substitute_variables,
)
from n3logic.store import TripleStore

from conftest import n3
from oracles import brute_isomorphic
from strategies import rdf_graphs

A, B, C, P, Q = (Iri(f"http://example.org/#{n}") for n in ("a", "b", "c", "p", "q"))


def test_triple_accessors():
    t = Triple(A, P, B)
    assert (t.subject, t.predicate, t.object) == (A, P, B)


def test_literal_rejects_datatype_and_language():
    with pytest.raises(ValueError):
        Literal("x", "http://dt", "en")


def test_formula_rejects_double_declaration():
    with pytest.raises(ValueError):
        Formula([], universals={"x"}, existentials={"x"})


def test_formula_is_a_set():
    f = Formula([Triple(A, P, B), Triple(A, P, B)])
    assert len(f) == 1 and Triple(A, P, B) in f


def test_quoted_equality_up_to_local_renaming():
    q1 = Quoted(Formula([Triple(Blank("x"), P, A)]))
    q2 = Quoted(Formula([Triple(Blank("y"), P, A)]))
    q3 = Quoted(Formula([Triple(Blank("y"), P, B)]))
    assert q1 == q2 and hash(q1) == hash(q2)
    assert q1 != q3


def test_quoted_free_universal_is_not_renamed():
    # ?x is bound outside the quoted formula, so {?x p a} and {?y p a} differ.
    assert Quoted(Formula([Triple(UniVar("x"), P, A)])) != Quoted(Formula([Triple(UniVar("y"), P, A)]))
    bound_x = Quoted(Formula([Triple(UniVar("x"), P, A)], universals={"x"}))
    bound_y = Quoted(Formula([Triple(UniVar("y"), P, A)], universals={"y"}))
    assert bound_x == bound_y


def test_substitute_reaches_nested_formulas_and_lists():
    x = UniVar("x")
    f = Formula([Triple(x, P, Quoted(Formula([Triple(x, Q, ListTerm((x, A)))])))], universals={"x"})
    g = substitute_variables(f, {x: B})
    assert g == Formula([Triple(B, P, Quoted(Formula([Triple(B, Q, ListTerm((B, A)))])))])


def test_rewrite_equals_is_referentially_opaque():
    f = Formula([Triple(A, P, C), Triple(C, Q, Quoted(Formula([Triple(A, P, C)])))])
    g = rewrite_equals(f, A, B)
    assert Triple(B, P, C) in g
    quoted = [t.object for t in g if t.predicate == Q][0]
    assert Triple(A, P, C) in quoted.formula


def test_conjoin_keeps_blanks_apart():
    f = Formula([Triple(Blank("x"), P, A)])
    g = Formula([Triple(Blank("x"), P, B)])
    both = conjoin([f, g])
    assert len({t.subject for t in both}) == 2


def test_conjoin_merges_universals():
    f = Formula([Triple(UniVar("x"), P, A)], universals={"x"})
    g = Formula([Triple(UniVar("x"), Q, B)], universals={"x"})
    both = conjoin([f, g])
    assert {t.subject for t in both} == {UniVar("x")}
    assert both.universals == {"x"}


def test_rename_apart():
    f = Formula([Triple(Blank("b"), P, ExiVar("e"))], existentials={"e"})
    g = rename_apart(f, {"b", "e"})
    names = {t.subject.id for t in g} | {t.object.name for t in g}
    assert not names & {"b", "e"}
    assert isomorphic(f, g)


def test_isomorphism_basics():
    assert isomorphic(n3("_:a :p _:b . _:b :p _:a ."), n3("_:x :p _:y . _:y :p _:x ."))
    assert not isomorphic(n3("_:a :p _:b . _:b :p _:a ."), n3("_:x :p _:y . _:y :p _:y ."))
    assert isomorphic(n3("{ ?x :p :a } => { ?x :q :a } ."), n3("{ ?y :p :a } => { ?y :q :a } ."))


def test_isomorphism_hard_regular_graphs():
    # Two 2-regular graphs on six nodes: a hexagon and two triangles.
    hexagon = " ".join(f"_:n{i} :e _:n{(i + 1) % 6} . _:n{(i + 1) % 6} :e _:n{i} ." for i in range(6))
    tri = " ".join(
        f"_:{g}{i} :e _:{g}{(i + 1) % 3} . _:{g}{(i + 1) % 3} :e _:{g}{i} ." for g in "uv" for i in range(3)
    )
    assert not isomorphic(n3(hexagon), n3(tri))
    shifted = " ".join(f"_:m{i} :e _:m{(i + 1) % 6} . _:m{(i + 1) % 6} :e _:m{i} ." for i in range(6))
    assert isomorphic(n3(hexagon), n3(shifted))


def test_canonical_mapping_names():
    m = canonical_mapping(n3("_:a :p _:b ."))
    assert sorted(v.id for v in m.values()) == ["c0", "c1"]


@settings(max_examples=200, deadline=None)
@given(rdf_graphs, rdf_graphs)
def test_isomorphic_agrees_with_brute_force(f, g):
    assert isomorphic(f, g) == brute_isomorphic(f, g, Blank)


@settings(max_examples=200, deadline=None)
@given(rdf_graphs, st.permutations(["b0", "b1", "b2", "b3"]))
def test_isomorphic_under_relabeling(f, perm):
    m = {Blank(f"b{i}"): Blank("z" + perm[i]) for i in range(4)}
    g = Formula(Triple(*(m.get(t, t) for t in tr)) for tr in f)
    assert isomorphic(f, g)


def test_store_indexes():
    s = TripleStore.from_triples([Triple(A, P, B), Triple(A, Q, C), Triple(A, P, B)])
    assert len(s) == 2
    assert Triple(A, Q, C) in s and Triple(C, Q, A) not in s
    assert s.with_predicate(P) == [Triple(A, P, B)]
    assert s.with_predicate(Iri("http://nowhere/")) == []


def test_conjoin_fresh_names_avoid_other_conjuncts():
    a, p = Iri("http://e/#a"), Iri("http://e/#p")
    f = Formula([Triple(Blank("b0"), p, a)])
    g = Formula([Triple(a, p, Quoted(Formula([Triple(Blank("b0"), p, Blank("b1"))])))])
    assert isomorphic(conjoin([f, g]), conjoin([g, f]))
