import json
import shutil

import pytest

from lexsparql.cli import ConfigError, build_config, main, parse_config
from lexsparql.dataset import load_jsonl, read_jsonl


@pytest.fixture(scope="module")
def populated_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("pipeline")
    assert main(["populate", "--out", str(out)]) == 0
    return out


def copy_dataset(src, dst):
    dst.mkdir(parents=True, exist_ok=True)
    shutil.copy(src / "dataset.jsonl", dst / "dataset.jsonl")
    return dst


def read(path):
    with open(path, encoding="utf-8") as fh:
        return list(read_jsonl(fh))


def test_lint_ok(capsys):
    assert main(["lint"]) == 0
    assert "catalog: 189 templates" in capsys.readouterr().out


def test_populate_outputs(populated_dir, executor):
    with open(populated_dir / "dataset.jsonl", encoding="utf-8") as fh:
        records = load_jsonl(fh)
    assert len(records) > 189
    for rec in records:
        assert not executor.execute(rec.query).is_empty()
    manifest = (populated_dir / "manifest.txt").read_text(encoding="utf-8")
    assert "seed = 0" in manifest and "k = 1" in manifest
    assert "rows.t1_P5185 = " in manifest


def test_split_twice_is_byte_identical(populated_dir, tmp_path):
    a = copy_dataset(populated_dir, tmp_path / "a")
    b = copy_dataset(populated_dir, tmp_path / "b")
    assert main(["split", "--out", str(a), "--seed", "7"]) == 0
    assert main(["split", "--out", str(b), "--seed", "7"]) == 0
    for name in ("train.jsonl", "test.jsonl", "train.txt", "test_ids.txt", "split_manifest.txt"):
        assert (a / name).read_bytes() == (b / name).read_bytes(), name
    assert "seed = 7" in (a / "split_manifest.txt").read_text(encoding="utf-8")


def test_eval_gold_predictions(populated_dir, tmp_path):
    out = copy_dataset(populated_dir, tmp_path / "run")
    assert main(["split", "--out", str(out)]) == 0
    assert main(["prompts", "--out", str(out)]) == 0
    ids = (out / "test_ids.txt").read_text(encoding="utf-8").split()
    tests = read(out / "test.jsonl")
    assert [p["id"] for p in read(out / "prompts.jsonl")] == ids
    preds = out / "predictions.jsonl"
    preds.write_text("".join(
        json.dumps({"id": i, "responses": [f"<code>{t['query']}</code>"]}) + "\n" for i, t in zip(ids, tests)
    ), encoding="utf-8")
    assert main(["eval", "--out", str(out), "--predictions", str(preds)]) == 0
    report = json.loads((out / "report.json").read_text(encoding="utf-8"))
    assert report[0]["mean_pass_at_k"] == 1.0
    assert report[0]["n_voided"] == 0
    assert report[0]["corpus_bleu"] == pytest.approx(100.0, abs=0.01)
    assert "k=1" in (out / "report.txt").read_text(encoding="utf-8")
    # check writes one line per gold query
    assert main(["check", "--out", str(out), "--profile", "gold_lint"]) == 0
    checks = read(out / "checks.jsonl")
    assert len(checks) == len(tests) and all(c["ratio"] == "1" for c in checks)
    assert main(["report", "--out", str(out)]) == 0


def test_config_file_and_env(tmp_path, monkeypatch):
    cfg = tmp_path / "run.conf"
    cfg.write_text("# comment\nseed = 3\nk = 2\nprofile = gold_lint\nendpoint = http://example.org/sparql\n")
    values = parse_config(cfg.read_text())
    assert build_config(values, {}).endpoint == "http://example.org/sparql"
    assert build_config(values, {"LEXSPARQL_ENDPOINT": "mock:"}).endpoint == "mock:"
    assert build_config(values, {}).k == 2
    with pytest.raises(ConfigError):
        parse_config("nonsense line")
    with pytest.raises(ConfigError):
        parse_config("colour = red")
    with pytest.raises(ConfigError):
        build_config({"k": "0"}, {})
    with pytest.raises(ConfigError):
        build_config({"seed": "x"}, {})


def test_exit_codes(tmp_path):
    assert main(["no-such-command"]) == 2
    bad = tmp_path / "bad.conf"
    bad.write_text("k = 0\n")
    assert main(["lint", "--config", str(bad)]) == 2
    assert main(["lint", "--config", str(tmp_path / "missing.conf")]) == 2
    assert main(["split", "--out", str(tmp_path / "empty")]) == 3
    (tmp_path / "broken").mkdir()
    (tmp_path / "broken" / "dataset.jsonl").write_text('{"utterance": "x"}\n')
    assert main(["split", "--out", str(tmp_path / "broken")]) == 5
    assert main(["populate", "--out", str(tmp_path / "p"), "--endpoint", "http://127.0.0.1:9/sparql",
                 "--templates", "q20"]) == 4


def test_unknown_prediction_id(populated_dir, tmp_path):
    out = copy_dataset(populated_dir, tmp_path / "run")
    assert main(["split", "--out", str(out)]) == 0
    preds = out / "p.jsonl"
    preds.write_text(json.dumps({"id": "nope#0", "responses": ["ASK {}"]}) + "\n")
    assert main(["eval", "--out", str(out), "--predictions", str(preds)]) == 5


def test_inputs_not_mutated(populated_dir, tmp_path):
    out = copy_dataset(populated_dir, tmp_path / "run")
    before = (out / "dataset.jsonl").read_bytes()
    assert main(["split", "--out", str(out)]) == 0
    assert (out / "dataset.jsonl").read_bytes() == before


def test_check_known_qitems(tmp_path):
    queries = tmp_path / "q.jsonl"
    queries.write_text(json.dumps({"id": "a", "query": "ASK { ?x wdt:P5185 wd:Q123 }"}) + "\n")
    out = tmp_path / "out"
    assert main(["check", "--out", str(out), "--input", str(queries)]) == 0
    assert read(out / "checks.jsonl")[0]["results"]["C7"] == "fail"
    known = tmp_path / "known.txt"
    known.write_text("# extra ids\nQ123\n")
    assert main(["check", "--out", str(out), "--input", str(queries), "--known-qitems", str(known)]) == 0
    assert read(out / "checks.jsonl")[0]["results"]["C7"] == "pass"
