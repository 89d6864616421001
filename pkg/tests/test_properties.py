"""Algebraic invariants, each checked on at least 200 generated cases."""

from hypothesis import given, settings
from hypothesis import strategies as st

from n3logic import kernels
from n3logic.engine import conclusion, includes, not_includes
from n3logic.model import Blank, Formula, conjoin, isomorphic
from n3logic.parser import parse_document
from n3logic.serializer import SerializerConfig, canonical_text, serialize, serialize_flat

from oracles import brute_entails
from strategies import PREFIXES, formulas, ground_graphs, rdf_graphs, rich_formulas, rule_sets

N = settings(max_examples=200, deadline=None)


def relabel(f: Formula, perm) -> Formula:
    m = {Blank(f"b{i}"): Blank("r" + p) for i, p in enumerate(perm)}
    return Formula((tuple(m.get(t, t) for t in tr) for tr in f), f.universals, f.existentials)


@N
@given(rich_formulas)
def test_serialize_round_trip(f):
    text = serialize(f, SerializerConfig(prefixes=PREFIXES))
    assert isomorphic(parse_document(text), f), text


@N
@given(rich_formulas)
def test_flat_round_trip(f):
    assert isomorphic(parse_document(serialize_flat(f)), f)


@N
@given(rdf_graphs, st.permutations(["0", "1", "2", "3"]))
def test_canonical_text_ignores_blank_labels(f, perm):
    assert canonical_text(f, PREFIXES) == canonical_text(relabel(f, perm), PREFIXES)


@N
@given(rdf_graphs)
def test_includes_is_reflexive(f):
    assert includes(f, f)


@N
@given(rdf_graphs, rdf_graphs)
def test_includes_agrees_with_brute_force(f, g):
    # Blank nodes in the data are constants; in the pattern they are existential.
    assert includes(f, g) == brute_entails(list(f), list(g), Blank)


@N
@given(rdf_graphs, rdf_graphs, ground_graphs)
def test_includes_is_monotone_in_the_data(f, g, h):
    if includes(f, g):
        assert includes(conjoin([f, h]), g)


@N
@given(rdf_graphs, rdf_graphs)
def test_not_includes_is_the_complement(f, g):
    assert not_includes(f, g) != includes(f, g)


@N
@given(formulas, formulas)
def test_conjoin_is_commutative(f, g):
    assert isomorphic(conjoin([f, g]), conjoin([g, f]))


@N
@given(rdf_graphs, rdf_graphs, rdf_graphs)
def test_conjoin_is_associative(f, g, h):
    assert isomorphic(conjoin([conjoin([f, g]), h]), conjoin([f, conjoin([g, h])]))


@N
@given(rule_sets())
def test_conclusion_is_idempotent_and_extensive(case):
    facts, rules = case
    kb = Formula(facts + rules)
    once = conclusion(kb)
    assert kb.triples <= once.triples
    assert conclusion(once) == once


@N
@given(rule_sets(), st.randoms(use_true_random=False))
def test_conclusion_ignores_rule_order(case, rnd):
    facts, rules = case
    shuffled = list(rules)
    rnd.shuffle(shuffled)
    a = conclusion(Formula(facts + rules))
    b = conclusion(Formula(shuffled + facts))
    assert a.triples == b.triples


@N
@given(rule_sets(), st.lists(st.integers(0, 5), max_size=3))
def test_conclusion_is_monotone(case, drop):
    facts, rules = case
    fewer = [t for i, t in enumerate(facts) if i not in drop]
    assert conclusion(Formula(fewer + rules)).triples <= conclusion(Formula(facts + rules)).triples


@N
@given(rule_sets())
def test_backends_agree_on_closures(case):
    facts, rules = case
    kb = Formula(facts + rules)
    original = kernels.join
    results = []
    try:
        for join in kernels.available_backends().values():
            kernels.join = join
            results.append(conclusion(kb).triples)
    finally:
        kernels.join = original
    assert all(r == results[0] for r in results)
