import re
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from check_table import CHECK_TABLE
from conftest import GENDER_QUERY
from lexsparql.sparqlcheck import (
    CHECK_IDS,
    PROFILES,
    CheckProfile,
    CheckReport,
    granularity_ratio,
    qitems_in,
    run_checks,
    tokenize,
)

LETTER = {"pass": "P", "fail": "F", "not_applicable": "N"}


def spelled(report):
    return "".join(LETTER[report.results[c]] for c in CHECK_IDS)


def kinds(text):
    return [t.kind for t in tokenize(text)]


def test_tokenize_values_block():
    toks = tokenize("VALUES ?lemma {'Apfel'@de}")
    assert [t.kind for t in toks] == ["keyword", "variable", "brace_open", "literal", "language_tag", "brace_close"]
    assert [t.text for t in toks] == ["VALUES", "?lemma", "{", "'Apfel'", "@de", "}"]


def test_tokenize_empty():
    assert tokenize("") == []


def test_unterminated_literal_is_one_error_token():
    toks = tokenize("'unterminated")
    assert len(toks) == 1
    assert toks[0].kind == "error"
    assert toks[0].text == "'unterminated"


def test_tokenize_kinds():
    assert kinds("<http://x/y> wdt:P5185 ?x $y") == ["iri", "prefixed_name", "variable", "variable"]
    assert kinds("'a\\'b' \"c\" 12 true") == ["literal"] * 4
    assert kinds("# only a comment") == []
    assert kinds("select SeLeCt") == ["keyword", "keyword"]
    assert kinds("?x . ; , ( )") == ["variable", "punctuation", "punctuation", "punctuation", "paren", "paren"]


def test_tokens_are_slices_of_input():
    text = GENDER_QUERY + "  # trailing comment\n"
    toks = tokenize(text)
    for tok in toks:
        assert text[tok.offset:tok.end] == tok.text
    gaps = []
    pos = 0
    for tok in toks:
        gaps.append(text[pos:tok.offset])
        pos = tok.end
    gaps.append(text[pos:])
    assert all(re.fullmatch(r"(\s|#[^\n]*)*", g) for g in gaps)


@pytest.mark.parametrize("query,expected,options", CHECK_TABLE)
def test_check_table(query, expected, options):
    report = run_checks(query, CheckProfile(**options))
    assert spelled(report) == expected
    passed, failed = expected.count("P"), expected.count("F")
    assert report.ratio == Fraction(passed, passed + failed)


def test_gender_query_ratio_five_sixths():
    assert run_checks(GENDER_QUERY).ratio == Fraction(5, 6)


def test_gold_lint_skips_values_and_qitem_checks():
    report = run_checks(GENDER_QUERY, PROFILES["gold_lint"])
    assert set(report.results) == {"C1", "C2", "C3", "C4", "C6"}
    assert report.ratio == 1


def test_empty_string_ratio():
    report = run_checks("")
    assert (report.c_pass, report.c_all) == (3, 5)
    assert report.ratio == Fraction(3, 5)


def test_granularity_ratio_conventions():
    five_of_seven = CheckReport({c: ("pass" if i < 5 else "fail") for i, c in enumerate(CHECK_IDS)})
    assert granularity_ratio(five_of_seven) == Fraction(5, 7)
    assert granularity_ratio(CheckReport({"C1": "pass"})) == 1
    assert granularity_ratio(CheckReport({})) == 0
    assert granularity_ratio(CheckReport({"C2": "not_applicable"})) == 0


def test_unknown_check_id_rejected():
    with pytest.raises(ValueError):
        CheckProfile(enabled_checks=frozenset({"C8"}))


def test_known_variables_case_insensitive():
    profile = CheckProfile(known_variables={"?Foo"})
    assert run_checks("SELECT ?FOO WHERE { }", profile).results["C6"] == "pass"


def test_qitems_in():
    assert qitems_in("wd:Q1 <http://www.wikidata.org/entity/Q2> Q3 'Q4' ?Q5") == {"Q1", "Q2", "Q3"}


def test_gold_queries_pass_lint_and_fail_c5(records):
    lint = PROFILES["gold_lint"]
    for rec in records:
        assert run_checks(rec.query, lint).ratio == 1, rec.id
        if "VALUES" in rec.query:
            assert run_checks(rec.query).results["C5"] == "fail"


@settings(max_examples=300, deadline=None)
@given(st.text())
def test_run_checks_never_raises(text):
    report = run_checks(text)
    assert 0 <= report.ratio <= 1
    assert report.c_pass <= report.c_all


@settings(max_examples=200, deadline=None)
@given(st.integers(min_value=0, max_value=200), st.sampled_from([GENDER_QUERY, "ASK { ?x ?y ?z }", "SELECT ?a WHERE {"]))
def test_inserting_balanced_braces_keeps_c4(pos, query):
    before = run_checks(query).results["C4"]
    cut = min(pos, len(query))
    # insert only at token boundaries so no literal or name is split
    boundaries = {0, len(query)} | {t.offset for t in tokenize(query)} | {t.end for t in tokenize(query)}
    cut = max(b for b in boundaries if b <= cut)
    after = run_checks(query[:cut] + " { } " + query[cut:]).results["C4"]
    if before == "pass":
        assert after == "pass"


@pytest.mark.parametrize("word", ["select", "Select", "SELECT"])
def test_select_case_insensitive(word):
    report = run_checks(f"{word} ?lexeme WHERE {{ }}")
    assert (report.results["C1"], report.results["C2"]) == ("pass", "pass")
