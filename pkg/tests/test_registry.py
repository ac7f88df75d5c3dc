import io

import pytest

from lexsparql.registry import (
    CATEGORIES,
    DimensionMismatch,
    Registry,
    RegistryError,
    classify_property,
    dimension_profile_of,
    lexical_properties_in,
    load_registry,
    unregistered,
)
from lexsparql.templates import load_catalog

HEADER = "pid,label,category,attachment,range_kind\n"


def test_load_single_row():
    reg = load_registry(io.StringIO(HEADER + "P5185, grammatical gender, Linguistic, lexeme, q_item\n"))
    desc = reg.get("P5185")
    assert desc.label == "grammatical gender"
    assert desc.category == "Linguistic"
    assert (desc.attachment, desc.range_kind) == ("lexeme", "q_item")


def test_empty_file_gives_empty_registry():
    assert len(load_registry(io.StringIO(""))) == 0


def test_duplicate_pid_rejected_with_line():
    text = HEADER + "P5185,grammatical gender,Linguistic,lexeme,q_item\nP5185,again,Linguistic,lexeme,q_item\n"
    with pytest.raises(RegistryError) as err:
        load_registry(io.StringIO(text))
    assert err.value.line == 3


@pytest.mark.parametrize("row", [
    "X5185,g,Linguistic,lexeme,q_item",
    "P1,g,Astrology,lexeme,q_item",
    "P1,g,Linguistic,word,q_item",
    "P1,g,Linguistic,lexeme,number",
    "P1,g,Linguistic,lexeme",
])
def test_bad_rows_rejected(row):
    with pytest.raises(RegistryError):
        load_registry(io.StringIO(HEADER + row + "\n"))


def test_default_registry(registry):
    assert len(registry) == 34
    assert {p.category for p in registry} == set(CATEGORIES)
    assert classify_property(registry, "P5973") == "Semantic"
    assert classify_property(registry, "P7243") == "OrthographicPhonetic"
    with pytest.raises(KeyError):
        classify_property(registry, "P999999")


def test_language_lookup(registry):
    assert registry.language("de").qid == "Q188"
    assert registry.language("Q188").code == "de"
    assert registry.language("German").code == "de"
    with pytest.raises(KeyError):
        registry.language("xx")


def test_unregistered(registry):
    assert unregistered(["P5185", "P1"], registry) == {"P1"}
    assert unregistered([], Registry()) == set()


def test_lexical_properties_in():
    assert lexical_properties_in("?l wdt:P5185 ?g ; wdt:P5191 ?e . ?x wdt:P5185 ?y") == {"P5185", "P5191"}


def test_q20_profile(catalog):
    profile = dimension_profile_of(catalog.get("q20"))
    assert (profile.output_arity, profile.linguality, profile.complexity) == ("single", "mono", "simple")


def _doc(tid, complexity, linguality, body, variant="Create a French-German-Basque lexicon"):
    return f"""=== {tid}
paradigm: multi_property
output: multi
linguality: {linguality}
complexity: {complexity}
tags:
provenance: reconstructed
--- variants
{variant}
--- sparql
{body}
"""


THREE_PROPS = "SELECT ?lexeme WHERE { ?lexeme wdt:P5185 ?a ; wdt:P5191 ?b ; wdt:P5137 ?c . }"


def test_complexity_mismatch_is_an_error():
    with pytest.raises(ValueError):
        load_catalog(_doc("m1", "simple", "mono", THREE_PROPS))
    spec = load_catalog(_doc("m2", "complex", "mono", THREE_PROPS)).get("m2")
    spec.dimensions = type(spec.dimensions)("multi", "mono", "simple")
    with pytest.raises(DimensionMismatch):
        dimension_profile_of(spec)


def test_multilingual_lexicon_template():
    body = "SELECT ?lexeme ?lemma WHERE { ?lexeme wikibase:lemma ?lemma ; dct:language ?language . " \
           "VALUES ?language { wd:Q150 wd:Q188 wd:Q8752 } }"
    spec = load_catalog(_doc("lex", "simple", "multi", body)).get("lex")
    assert dimension_profile_of(spec).linguality == "multi"
