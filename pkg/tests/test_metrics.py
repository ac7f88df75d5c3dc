import itertools
import json
from fractions import Fraction

import pytest

from conftest import GENDER_QUERY, FIXTURES
from lexsparql.dataset import DatasetRecord
from lexsparql.kgexec import LocalExecutor
from lexsparql.metrics import (
    BLEU_SIGNATURE,
    AggregateReport,
    MetricsError,
    RecordEvaluation,
    aggregate,
    bleu_corpus,
    bleu_stats,
    evaluate_record,
    extract_sparql,
    format_report,
    pass_at_k,
    tokenize_13a,
)
from lexsparql.sparqlcheck import PROFILES

FIXTURE = json.loads((FIXTURES / "bleu_fixture.json").read_text(encoding="utf-8"))
RENAMED = (GENDER_QUERY.replace("?lexeme", "?entry").replace("?qitemLabel", "?genderLabel")
           .replace("?qitem", "?gender"))


@pytest.fixture
def gold():
    return DatasetRecord("What is the gender of Apfel in German?", "t1_P5185", GENDER_QUERY)


@pytest.mark.parametrize("flags,value", [
    ([True, False, True], Fraction(2, 3)),
    ([False], Fraction(0)),
    ([True, True, True], Fraction(1)),
])
def test_pass_at_k_examples(flags, value):
    assert pass_at_k(flags) == value


def test_pass_at_k_exhaustive_and_permutation_invariant():
    for k in (1, 3, 5):
        for flags in itertools.product([False, True], repeat=k):
            assert pass_at_k(flags) == Fraction(sum(flags), k)
            for perm in itertools.permutations(flags):
                assert pass_at_k(perm) == pass_at_k(flags)
    with pytest.raises(MetricsError):
        pass_at_k([])


def test_signature_constant():
    assert FIXTURE["signature"].startswith(BLEU_SIGNATURE + "|")


@pytest.mark.parametrize("subset", sorted(FIXTURE["corpus"]))
def test_bleu_matches_fixture(subset):
    spec = FIXTURE["corpus"][subset]
    pairs = [FIXTURE["pairs"][i] for i in spec["indices"]]
    cands, refs = [c for c, _ in pairs], [r for _, r in pairs]
    stats = bleu_stats(cands, refs)
    assert list(stats.correct) == spec["counts"]
    assert list(stats.total) == spec["totals"]
    assert (stats.sys_len, stats.ref_len) == (spec["sys_len"], spec["ref_len"])
    assert bleu_corpus(cands, refs) == pytest.approx(spec["score"], abs=0.01)


def test_bleu_single_pairs_match_fixture():
    for (cand, ref), score in zip(FIXTURE["pairs"], FIXTURE["single"]):
        assert bleu_corpus([cand], [ref]) == pytest.approx(score, abs=0.01)


def test_bleu_identity_and_empty():
    refs = [r for _, r in FIXTURE["pairs"]]
    assert bleu_corpus(refs, refs) == pytest.approx(100.0, abs=0.01)
    assert bleu_corpus([""], [GENDER_QUERY]) == 0.0
    with pytest.raises(MetricsError):
        bleu_corpus(["a"], [])


def test_bleu_bounds():
    for cand, ref in FIXTURE["pairs"]:
        assert 0.0 <= bleu_corpus([cand], [ref]) <= 100.0 + 1e-9


def test_bleu_against_live_scorer():
    sacrebleu = pytest.importorskip("sacrebleu")
    cands = [c for c, _ in FIXTURE["pairs"]]
    refs = [r for _, r in FIXTURE["pairs"]]
    live = sacrebleu.corpus_bleu(cands, [refs], tokenize="13a", smooth_method="exp", lowercase=False)
    assert bleu_corpus(cands, refs) == pytest.approx(live.score, abs=0.01)


def test_tokenize_13a():
    assert tokenize_13a("VALUES ?lemma {'Apfel'@de} .") == [
        "VALUES", "?", "lemma", "{", "'Apfel'", "@", "de", "}", "."
    ]
    assert tokenize_13a("LIMIT 1,000.5") == ["LIMIT", "1,000.5"]


@pytest.mark.parametrize("response,expected", [
    ("Sure! <code>ASK { }</code> hope it helps", "ASK { }"),
    ("<code>SELECT ?x WHERE { }", "SELECT ?x WHERE { }"),
    ("The query is SELECT ?x WHERE { }", "SELECT ?x WHERE { }"),
    ("  no query here ", "no query here"),
])
def test_extract_sparql(response, expected):
    assert extract_sparql(response) == expected


def test_identical_response(gold, feminine_apfel):
    ev = evaluate_record(gold, [GENDER_QUERY], LocalExecutor(feminine_apfel), PROFILES["gold_lint"])
    assert ev.correct_flags == [True]
    assert ev.pass_at_k == 1
    assert ev.granularity == 1


def test_gold_gibberish_renamed(gold, feminine_apfel):
    responses = [GENDER_QUERY, "I do not know, sorry.", RENAMED]
    ev = evaluate_record(gold, responses, LocalExecutor(feminine_apfel))
    assert ev.correct_flags == [True, False, True]
    assert ev.pass_at_k == Fraction(2, 3)
    # gold and renamed fail only the VALUES check; gibberish passes C4, C5, C7
    assert ev.granularity_ratios == [Fraction(5, 6), Fraction(3, 5), Fraction(5, 6)]


def test_wrong_answer_is_incorrect(gold, feminine_apfel):
    wrong = GENDER_QUERY.replace("'Apfel'@de", "'Garten'@de")
    ev = evaluate_record(gold, [wrong], LocalExecutor(feminine_apfel))
    assert ev.correct_flags == [False]
    assert ev.reasons == ["missing gold row"]


def test_invented_qitem_fails_c7_but_gold_items_are_known(feminine_apfel):
    gold = DatasetRecord("u", "ask_t1_P5185",
                         "ASK { VALUES ?lemma {'Apfel'@de} . ?lexeme wikibase:lemma ?lemma ; wdt:P5185 wd:Q1775415 }")
    ev = evaluate_record(gold, [gold.query, gold.query.replace("Q1775415", "Q123")], LocalExecutor(feminine_apfel))
    assert ev.correct_flags == [True, False]
    assert ev.granularity_ratios == [Fraction(5, 6), Fraction(4, 6)]


def test_unsupported_gold_is_voided(feminine_apfel):
    gold = DatasetRecord("u", "x", "SELECT ?x WHERE { { ?x ?p ?o } UNION { ?o ?p ?x } }")
    ev = evaluate_record(gold, [gold.query], LocalExecutor(feminine_apfel))
    assert ev.voided and "UNION" in ev.void_reason


def test_evaluate_does_not_mutate_gold(gold, feminine_apfel):
    before = (gold.utterance, gold.template_name, gold.query)
    evaluate_record(gold, [RENAMED], LocalExecutor(feminine_apfel))
    assert (gold.utterance, gold.template_name, gold.query) == before


def test_responses_independent(gold, feminine_apfel):
    ex = LocalExecutor(feminine_apfel)
    together = evaluate_record(gold, ["junk", GENDER_QUERY], ex)
    alone = [evaluate_record(gold, [r], ex) for r in ["junk", GENDER_QUERY]]
    assert together.correct_flags == [a.correct_flags[0] for a in alone]
    assert together.granularity_ratios == [a.granularity_ratios[0] for a in alone]


def _ev(flags, ratios=None, voided=False, query="SELECT ?x WHERE { ?x ?p ?o }"):
    ev = RecordEvaluation("r", [query] * max(1, len(flags)), list(flags),
                          list(ratios or [Fraction(1)] * len(flags)), gold_query=query)
    ev.voided = voided
    return ev


def test_aggregate_means():
    report = aggregate([_ev([True]), _ev([False])], "non_generalization", 1)
    assert report.mean_pass_at_k == Fraction(1, 2)
    assert report.corpus_bleu == pytest.approx(100.0, abs=0.01)


def test_aggregate_bookkeeping():
    evals = [_ev([True, False, True]), _ev([], voided=True), _ev([False, False, True])]
    report = aggregate(evals, "generalization", 3)
    assert report.n_records + report.n_voided == 3
    assert report.n_voided == 1
    assert report.mean_pass_at_k == Fraction(1, 2)
    assert 0 <= report.mean_granularity <= 1
    assert AggregateReport.from_json(report.to_json()) == report
    with pytest.raises(MetricsError):
        aggregate(evals, "other", 3)
    with pytest.raises(MetricsError):
        aggregate([_ev([], voided=True)], "generalization", 1)


def test_identity_corpus_report(records, executor):
    sample = records[:40]
    evals = [evaluate_record(r, [r.query], executor, record_id=str(i)) for i, r in enumerate(sample)]
    report = aggregate(evals, "non_generalization", 1)
    assert report.mean_pass_at_k == 1
    assert report.corpus_bleu == pytest.approx(100.0, abs=0.01)


def test_best_of_k_bleu_not_below_first():
    ev = RecordEvaluation("r", ["junk", "SELECT ?x WHERE { ?x ?p ?o }"], [False, True],
                          [Fraction(0), Fraction(1)], gold_query="SELECT ?x WHERE { ?x ?p ?o }")
    first = aggregate([ev], "non_generalization", 2, bleu_mode="first").corpus_bleu
    best = aggregate([ev], "non_generalization", 2, bleu_mode="best").corpus_bleu
    assert best >= first and best == pytest.approx(100.0, abs=0.01)


def test_format_report_table():
    reports = [
        AggregateReport("non_generalization", 1, Fraction(1), Fraction(5, 6), 100.0, 10, 0),
        AggregateReport("generalization", 1, Fraction(1, 2), Fraction(1), 54.4, 10, 0),
    ]
    text = format_report(reports, "phi")
    lines = text.splitlines()
    assert "Non-Generalization" in lines[0] and "Generalization" in lines[0]
    assert lines[1].split() == ["pass@k", "R_gran", "BLEU"] * 2
    assert lines[2].split() == ["phi", "k=1", "1.00", "0.83", "100.0", "0.50", "1.00", "54.4"]
