"""Every published fragment parses; paired spellings mean the same thing."""

import pytest

from n3logic.errors import ParseError
from n3logic.model import isomorphic
from n3logic.parser import parse_document, parse_with_state

from conftest import CORPUS

PRELUDE = (CORPUS / "prelude.n3").read_text()
FILES = sorted(p.name for p in CORPUS.glob("*.n3") if p.name != "prelude.n3")


def parse(text):
    return parse_document(PRELUDE + "\n" + text, base="http://example.org/doc")


def fragment(name):
    return (CORPUS / name).read_text()


def test_corpus_is_complete():
    assert len(FILES) == 39


@pytest.mark.parametrize("name", FILES)
def test_fragment_parses(name):
    f, state = parse_with_state(PRELUDE + "\n" + fragment(name), base="http://example.org/doc")
    if name == "syntax_prefixes.n3":
        assert len(f) == 0
        assert state.prefixes["j"] == "http://example.org/joe-foaf#"
        assert state.prefixes[""] == "http://dig.csail.mit.edu/2006/Papers/TPLP/example/exconf#"
    else:
        assert len(f) > 0


@pytest.mark.parametrize("a, b", [
    ("exists_forsome.n3", "exists_brackets.n3"),
    ("forall_explicit.n3", "forall_implicit.n3"),
])
def test_equivalent_spellings(a, b):
    assert isomorphic(parse(fragment(a)), parse(fragment(b)))


@pytest.mark.parametrize("name, fixed, printed", [
    ("syntax_predicate_list.n3", '";', '",'),
    ("syntax_quoted.n3", "html>", "html;"),
])
def test_printed_typos_do_not_parse(name, fixed, printed):
    text = fragment(name)
    assert fixed in text
    with pytest.raises(ParseError):
        parse(text.replace(fixed, printed, 1))
