from pathlib import Path

import pytest

from n3logic import kernels
from n3logic.parser import parse_document

FIXTURES = Path(__file__).parent / "fixtures"
CORPUS = FIXTURES / "corpus"
SCENARIOS = FIXTURES / "scenarios"
FIXTURE_MAP = SCENARIOS / "map.tsv"

PREFIXES = """
@prefix : <http://example.org/#> .
@prefix rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#> .
@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .
@prefix owl: <http://www.w3.org/2002/07/owl#> .
@prefix log: <http://www.w3.org/2000/10/swap/log#> .
@prefix math: <http://www.w3.org/2000/10/swap/math#> .
@prefix string: <http://www.w3.org/2000/10/swap/string#> .
@prefix list: <http://www.w3.org/2000/10/swap/list#> .
@prefix time: <http://www.w3.org/2000/10/swap/time#> .
@prefix os: <http://www.w3.org/2000/10/swap/os#> .
@prefix crypto: <http://www.w3.org/2000/10/swap/crypto#> .
"""


def n3(text: str, base: str = "http://example.org/doc"):
    """Parse ``text`` with the common prefixes in scope."""
    return parse_document(PREFIXES + text, base=base)


@pytest.fixture(params=sorted(kernels.available_backends()))
def backend(request, monkeypatch):
    """Run the test once per join backend."""
    monkeypatch.setattr(kernels, "join", kernels.available_backends()[request.param])
    return request.param
