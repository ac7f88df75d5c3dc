import pytest

from conftest import GENDER_QUERY, FEMININE_APFEL
from lexsparql.kgexec import (
    ParseError,
    RdfTerm,
    UnsupportedFeature,
    execute_local,
    parse_snapshot,
)
from lexsparql.kgexec.terms import wd

THREE_TRIPLES = """
wd:L1 wikibase:lemma 'Apfel'@de .
wd:L1 wdt:P5185 wd:Q1775415 .
wd:Q1775415 rdfs:label 'feminine'@en .
"""


def lit(text, lang=None):
    return RdfTerm.literal(text, language=lang)


def test_empty_ask_is_true():
    assert execute_local("ASK WHERE { }", parse_snapshot("")).truth is True
    assert execute_local("ASK { }", parse_snapshot(THREE_TRIPLES)).truth is True


def test_gender_query_manual_join():
    res = execute_local(GENDER_QUERY, parse_snapshot(THREE_TRIPLES))
    assert res.variables == ["lexeme", "qitem", "lemma", "qitemLabel"]
    assert res.rows == [{
        "lexeme": wd("L1"),
        "qitem": wd("Q1775415"),
        "lemma": lit("Apfel", "de"),
        "qitemLabel": lit("feminine", "en"),
    }]


def test_ask_true_and_false(feminine_apfel):
    base = "ASK { VALUES ?lemma {'Apfel'@de} . ?lexeme wikibase:lemma ?lemma ; wdt:P5185 wd:%s }"
    assert execute_local(base % "Q1775415", feminine_apfel).truth is True
    assert execute_local(base % "Q499327", feminine_apfel).truth is False


def test_label_falls_back_to_local_name():
    snap = parse_snapshot("wd:L1 wdt:P5185 wd:Q42 .")
    res = execute_local(
        "SELECT ?g ?gLabel WHERE { wd:L1 wdt:P5185 ?g . SERVICE wikibase:label { bd:serviceParam wikibase:language 'en' } }",
        snap,
    )
    assert res.rows[0]["gLabel"] == lit("Q42")


def test_label_language_preference():
    snap = parse_snapshot("wd:L1 wdt:P1 wd:Q1 .\nwd:Q1 rdfs:label 'Apfel'@de .\nwd:Q1 rdfs:label 'apple'@en .")
    q = "SELECT ?xLabel WHERE { wd:L1 wdt:P1 ?x . SERVICE wikibase:label { bd:serviceParam wikibase:language '%s' } }"
    assert execute_local(q % "de,en", snap).rows[0]["xLabel"] == lit("Apfel", "de")
    assert execute_local(q % "fr,en", snap).rows[0]["xLabel"] == lit("apple", "en")


def test_optional_keeps_unmatched():
    snap = parse_snapshot(FEMININE_APFEL + "wd:L3 wikibase:lemma 'Haus'@de .")
    res = execute_local(
        "SELECT ?lemma ?g WHERE { ?l wikibase:lemma ?lemma . OPTIONAL { ?l wdt:P5185 ?g } } ORDER BY ?lemma", snap
    )
    assert [r["lemma"].value for r in res.rows] == ["Apfel", "Garten", "Haus"]
    assert "g" not in res.rows[2]


def test_filter_and_distinct():
    snap = parse_snapshot(FEMININE_APFEL)
    res = execute_local(
        "SELECT DISTINCT ?lang WHERE { ?l dct:language ?lang ; wikibase:lemma ?lemma . FILTER(STRSTARTS(STR(?lemma), 'A') || LANG(?lemma) = 'de') }",
        snap,
    )
    assert res.rows == [{"lang": wd("Q188")}]


def test_longest_words_limit_and_order():
    lines = []
    for i in range(200):
        word = "w" * (1 + (i * 37) % 60) + str(i)
        lines.append(f"wd:L{i} wikibase:lemma '{word}'@en .")
        lines.append(f"wd:L{i} dct:language wd:Q1860 .")
    snap = parse_snapshot("\n".join(lines))
    res = execute_local(
        "SELECT ?lexeme ?lemma WHERE { ?lexeme dct:language wd:Q1860 ; wikibase:lemma ?lemma . }"
        " ORDER BY DESC(STRLEN(STR(?lemma))) LIMIT 50",
        snap,
    )
    lengths = [len(r["lemma"].value) for r in res.rows]
    assert len(lengths) == 50
    assert lengths == sorted(lengths, reverse=True)
    all_lengths = sorted((len(o.value) for _, _, o in snap if o.is_literal), reverse=True)
    assert lengths == all_lengths[:50]


def test_offset_and_order_by_lemma(snapshot):
    q = "SELECT ?lemma WHERE { ?l wikibase:lemma ?lemma ; dct:language wd:Q188 } ORDER BY ?lemma"
    everything = execute_local(q, snapshot).rows
    page = execute_local(q + " LIMIT 3 OFFSET 2", snapshot).rows
    assert page == everything[2:5]
    values = [r["lemma"].value for r in everything]
    assert values == sorted(values)


def test_numeric_filter():
    snap = parse_snapshot("wd:L1 wdt:P1 5 .\nwd:L2 wdt:P1 12 .\nwd:L3 wdt:P1 'x' .")
    res = execute_local("SELECT ?l WHERE { ?l wdt:P1 ?n . FILTER(?n > 10) }", snap)
    assert res.rows == [{"l": wd("L2")}]


@pytest.mark.parametrize("query,feature", [
    ("SELECT ?x WHERE { { ?x ?p ?o } UNION { ?o ?p ?x } }", "UNION"),
    ("SELECT ?x WHERE { ?x wdt:P1/wdt:P2 ?o }", "property paths"),
    ("SELECT (COUNT(?x) AS ?n) WHERE { ?x ?p ?o }", "SELECT expressions"),
    ("SELECT ?x WHERE { ?x ?p ?o } GROUP BY ?x", "GROUP BY"),
    ("SELECT ?x WHERE { ?x ?p ?o MINUS { ?x ?p ?o } }", "MINUS"),
])
def test_unsupported_features_are_named(query, feature):
    with pytest.raises(UnsupportedFeature) as err:
        execute_local(query, parse_snapshot(""))
    assert feature in str(err.value)


@pytest.mark.parametrize("query", [
    "SELECT ?x WHERE { ?x ?p }",
    "SELECT ?x WHERE { ?x ?p ?o",
    "gibberish",
    "",
])
def test_malformed_queries(query):
    with pytest.raises(ParseError):
        execute_local(query, parse_snapshot(""))


def test_every_gold_query_non_empty(records, executor):
    for rec in records:
        assert not executor.execute(rec.query).is_empty(), rec.id
