import io
import json
import random
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import GENDER_QUERY, PROMPT_APFEL_QUERY, PROMPT_MEDAILON_QUERY
from oracles import expected_test_count
from lexsparql.dataset import (
    DatasetError,
    DatasetRecord,
    SplitConfig,
    build_fewshot_prompt,
    build_prompts,
    export_jsonl,
    export_training_text,
    load_jsonl,
    parse_training_text,
    split,
    training_text,
)

# the reference prompt, line by line
REFERENCE_PROMPT = "\n".join([
    "Utterance 1:",
    "Apfel gender in German",
    "SPARQL 1:",
    PROMPT_APFEL_QUERY,
    "",
    "Utterance 2:",
    "medailon gender Czech",
    "SPARQL 2:",
    PROMPT_MEDAILON_QUERY,
    "",
    "Utterance:",
    "What is Probekörpers gender in German?",
])


def corpus(sizes):
    return [
        DatasetRecord(f"question {tid} {i}", tid, "ASK { }")
        for tid, n in sizes.items()
        for i in range(n)
    ]


def check_split(records, config):
    result = split(records, config)
    sizes = Counter(r.template_name for r in records)
    test_sizes = Counter(r.template_name for r in result.test)
    for tid, n in sizes.items():
        assert test_sizes[tid] == expected_test_count(n)
        assert result.per_template_counts[tid] == (n - test_sizes[tid], test_sizes[tid])
    assert Counter(map(id, result.train + result.test)) == Counter(map(id, records))
    assert len(set(result.test_ids)) == len(result.test)
    for tid_k, rec in zip(result.test_ids, result.test):
        tid, k = tid_k.rsplit("#", 1)
        assert tid == rec.template_name and 0 <= int(k) < test_sizes[tid]
    return result


def test_boundary_counts():
    cfg = SplitConfig()
    assert cfg.test_count(1) == 1
    assert cfg.test_count(29_922) == 20
    assert cfg.test_count(100) == 10
    assert cfg.test_count(9) == 1
    assert cfg.test_count(199) == 19
    assert cfg.test_count(200) == 20


def test_single_record_template_goes_to_test():
    result = check_split(corpus({"limit_t9_P2859": 1}), SplitConfig())
    assert result.per_template_counts["limit_t9_P2859"] == (0, 1)
    assert result.train == []


def test_split_is_order_insensitive():
    records = corpus({"a": 57, "b": 3, "c": 230})
    shuffled = list(records)
    random.Random(5).shuffle(shuffled)
    one, two = split(records, SplitConfig(seed=3)), split(shuffled, SplitConfig(seed=3))
    assert one.test == two.test and one.test_ids == two.test_ids
    assert set(map(id, one.train)) == set(map(id, two.train))


def test_seed_changes_selection():
    records = corpus({"a": 300})
    assert split(records, SplitConfig(seed=0)).test != split(records, SplitConfig(seed=1)).test


def test_empty_split_rejected():
    with pytest.raises(DatasetError):
        split([])


def test_bad_split_config():
    with pytest.raises(ValueError):
        SplitConfig(test_fraction=0)
    with pytest.raises(ValueError):
        SplitConfig(test_cap=0)


@settings(max_examples=60, deadline=None)
@given(st.dictionaries(st.sampled_from("abcdef"), st.integers(1, 400), min_size=1, max_size=4), st.integers(0, 99))
def test_split_law_property(sizes, seed):
    records = corpus(sizes)
    first = check_split(records, SplitConfig(seed=seed))
    again = split(records, SplitConfig(seed=seed))
    assert first.test_ids == again.test_ids and first.test == again.test


def test_record_validation():
    with pytest.raises(DatasetError):
        DatasetRecord("", "q1", "ASK {}")
    with pytest.raises(DatasetError):
        DatasetRecord("u", "q1", "SELECT 'unterminated")


def test_jsonl_roundtrip_and_key_order():
    records = [
        DatasetRecord("a", "q1", "ASK { }"),
        DatasetRecord("b", "q2", "SELECT ?x\nWHERE { ?x ?p ?o }"),
        DatasetRecord("c", "q3", "ASK { ?x ?p 'ü' }"),
    ]
    sink = io.StringIO()
    assert export_jsonl(records, sink) == 3
    lines = sink.getvalue().splitlines()
    assert len(lines) == 3
    assert list(json.loads(lines[0])) == ["utterance", "template_name", "query"]
    assert "\\n" in lines[1]
    assert load_jsonl(io.StringIO(sink.getvalue())) == records


def test_empty_exports():
    sink = io.StringIO()
    assert export_jsonl([], sink) == 0 and sink.getvalue() == ""
    assert export_training_text([], sink) == 0 and sink.getvalue() == ""


def test_bad_jsonl_line():
    with pytest.raises(DatasetError):
        load_jsonl(io.StringIO('{"utterance": "a"}\n'))
    with pytest.raises(DatasetError):
        load_jsonl(io.StringIO("{not json\n"))


def test_training_text_format():
    rec = DatasetRecord("What is the gender of Apfel in German?", "t1_P5185", GENDER_QUERY)
    assert training_text(rec) == (
        "question: What is the gender of Apfel in German? answer: <code>" + GENDER_QUERY + "</code>\n"
    )


def test_code_fence_in_query_rejected():
    with pytest.raises(DatasetError):
        training_text(DatasetRecord("u", "q1", "SELECT ?x WHERE { ?x ?p '</code>' }"))


def test_training_text_roundtrip(records):
    sink = io.StringIO()
    assert export_training_text(records, sink) == len(records)
    pairs = parse_training_text(sink.getvalue())
    assert pairs == [(r.utterance, r.query) for r in records]


def test_reference_prompt_verbatim():
    train = [
        DatasetRecord("Apfel gender in German", "t1_P5185", PROMPT_APFEL_QUERY),
        DatasetRecord("medailon gender Czech", "t1_P5185", PROMPT_MEDAILON_QUERY),
    ]
    prompt = build_fewshot_prompt("t1_P5185", train, "What is Probekörpers gender in German?")
    assert prompt == REFERENCE_PROMPT


def test_zero_shot_prompt():
    assert build_fewshot_prompt("x", [], "hello", n_examples=0) == "Utterance:\nhello"


def test_prompt_needs_enough_examples():
    with pytest.raises(DatasetError):
        build_fewshot_prompt("q1", [DatasetRecord("a", "q1", "ASK { }")], "b")


def test_prompt_sampling_is_deterministic_and_template_local():
    train = corpus({"a": 10, "b": 10})
    one = build_fewshot_prompt("a", train, "t", seed=4)
    assert one == build_fewshot_prompt("a", train, "t", seed=4)
    assert "question b" not in one


def test_build_prompts_covers_test(records):
    result = split(records, SplitConfig())
    prompts = build_prompts(result)
    assert [p["id"] for p in prompts] == result.test_ids
    assert all(p["prompt"].count("SPARQL ") == 2 for p in prompts)
