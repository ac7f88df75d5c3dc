"""Dataset records, the per-template train/test split, export formats and few-shot prompts."""

from __future__ import annotations

import hashlib
import json
import re
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import IO, Iterable, Iterator, Optional

from .sparqlcheck import has_lexical_error, tokenize

OPEN_CODE = "<code>"
CLOSE_CODE = "</code>"
QUESTION = "question: "
ANSWER = " answer: "


class DatasetError(ValueError):
    pass


@dataclass(frozen=True)
class DatasetRecord:
    utterance: str
    template_name: str
    query: str

    def __post_init__(self):
        for name in ("utterance", "template_name", "query"):
            if not getattr(self, name):
                raise DatasetError(f"record field {name} is empty")
        if has_lexical_error(tokenize(self.query)):
            raise DatasetError(f"query of {self.template_name} record does not tokenize")

    def to_json(self) -> dict:
        return {"utterance": self.utterance, "template_name": self.template_name, "query": self.query}

    @classmethod
    def from_json(cls, doc: dict) -> "DatasetRecord":
        try:
            return cls(doc["utterance"], doc["template_name"], doc["query"])
        except (KeyError, TypeError):
            raise DatasetError(f"record needs utterance, template_name and query: {doc!r}") from None


@dataclass(frozen=True)
class SplitConfig:
    test_fraction: Fraction = Fraction(1, 10)
    test_cap: int = 20
    min_test_per_template: int = 1
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "test_fraction", Fraction(self.test_fraction))
        if not 0 < self.test_fraction <= 1:
            raise ValueError("test_fraction must lie in (0, 1]")
        if not self.test_cap >= self.min_test_per_template >= 1:
            raise ValueError("need test_cap >= min_test_per_template >= 1")

    def test_count(self, n: int) -> int:
        return min(max(self.min_test_per_template, (n * self.test_fraction).__floor__()), self.test_cap, n)


@dataclass
class SplitResult:
    train: list[DatasetRecord]
    test: list[DatasetRecord]
    per_template_counts: dict[str, tuple[int, int]]
    test_ids: list[str] = field(default_factory=list)


def _record_hash(record: DatasetRecord) -> str:
    text = "\x00".join((record.utterance, record.template_name, record.query))
    return hashlib.sha256(text.encode()).hexdigest()


def _shuffle_key(seed: int, template_id: str, record: DatasetRecord) -> tuple[str, str]:
    """Order-insensitive sort key: depends on the record, never on its position."""
    rh = _record_hash(record)
    return hashlib.sha256(f"{seed}\x00{template_id}\x00{rh}".encode()).hexdigest(), rh


def split(records: list[DatasetRecord], config: SplitConfig = SplitConfig()) -> SplitResult:
    if not records:
        raise DatasetError("cannot split an empty dataset")
    by_template: dict[str, list[int]] = defaultdict(list)
    for i, r in enumerate(records):
        by_template[r.template_name].append(i)
    in_test: dict[int, str] = {}
    counts = {}
    for tid in sorted(by_template):
        idx = by_template[tid]
        k = config.test_count(len(idx))
        ranked = sorted(idx, key=lambda i: _shuffle_key(config.seed, tid, records[i]))
        for n, i in enumerate(ranked[:k]):
            in_test[i] = f"{tid}#{n}"
        counts[tid] = (len(idx) - k, k)
    train = [r for i, r in enumerate(records) if i not in in_test]
    test_idx = sorted(in_test, key=lambda i: (records[i].template_name, int(in_test[i].rsplit("#", 1)[1])))
    return SplitResult(
        train=train,
        test=[records[i] for i in test_idx],
        per_template_counts=counts,
        test_ids=[in_test[i] for i in test_idx],
    )


# --- exports ----------------------------------------------------------------

def export_jsonl(records: Iterable[DatasetRecord], sink: IO[str]) -> int:
    n = 0
    for r in records:
        sink.write(json.dumps(r.to_json(), ensure_ascii=False) + "\n")
        n += 1
    return n


def read_jsonl(source: IO[str]) -> Iterator[dict]:
    for lineno, line in enumerate(source, start=1):
        if not line.strip():
            continue
        try:
            yield json.loads(line)
        except json.JSONDecodeError as exc:
            raise DatasetError(f"line {lineno}: {exc}") from None


def load_jsonl(source: IO[str]) -> list[DatasetRecord]:
    return [DatasetRecord.from_json(doc) for doc in read_jsonl(source)]


def training_text(record: DatasetRecord) -> str:
    if CLOSE_CODE in record.query or OPEN_CODE in record.query:
        raise DatasetError(f"query of {record.template_name} contains a code fence")
    if ANSWER + OPEN_CODE in record.utterance or "\n" in record.utterance:
        raise DatasetError(f"utterance of {record.template_name} cannot be represented")
    return f"{QUESTION}{record.utterance}{ANSWER}{OPEN_CODE}{record.query}{CLOSE_CODE}\n"


def export_training_text(records: Iterable[DatasetRecord], sink: IO[str]) -> int:
    n = 0
    for r in records:
        sink.write(training_text(r))
        n += 1
    return n


_TRAINING = re.compile(
    re.escape(QUESTION) + r"(.*?)" + re.escape(ANSWER + OPEN_CODE) + r"(.*?)" + re.escape(CLOSE_CODE) + r"\n",
    re.DOTALL,
)


def parse_training_text(text: str) -> list[tuple[str, str]]:
    """Inverse of export_training_text: (utterance, query) pairs in order."""
    out = []
    pos = 0
    while pos < len(text):
        m = _TRAINING.match(text, pos)
        if not m:
            raise DatasetError(f"malformed training text at offset {pos}")
        out.append((m.group(1), m.group(2)))
        pos = m.end()
    return out


# --- prompts ----------------------------------------------------------------

def build_fewshot_prompt(template_id: str, train: list[DatasetRecord], target_utterance: str,
                         n_examples: int = 2, seed: int = 0) -> str:
    """Few-shot prompt with ``n_examples`` training pairs from the same template.

    Which examples are chosen depends only on the seed and the records; the
    chosen ones appear in their training-set order.
    """
    pool = [(i, r) for i, r in enumerate(train) if r.template_name == template_id]
    if len(pool) < n_examples:
        raise DatasetError(
            f"template {template_id} has {len(pool)} training records, {n_examples} needed"
        )
    chosen = sorted(pool, key=lambda p: _shuffle_key(seed, template_id, p[1]))[:n_examples]
    chosen.sort(key=lambda p: p[0])
    blocks = [
        f"Utterance {k}:\n{r.utterance}\nSPARQL {k}:\n{r.query}\n"
        for k, (_, r) in enumerate(chosen, start=1)
    ]
    blocks.append(f"Utterance:\n{target_utterance}")
    return "\n".join(blocks)


def build_prompts(split_result: SplitResult, n_examples: int = 2, seed: int = 0,
                  templates: Optional[Iterable[str]] = None) -> list[dict]:
    """One prompt per test record, keyed by its stable test id."""
    wanted = set(templates) if templates is not None else None
    out = []
    for test_id, record in zip(split_result.test_ids, split_result.test):
        if wanted is not None and record.template_name not in wanted:
            continue
        prompt = build_fewshot_prompt(record.template_name, split_result.train, record.utterance,
                                      n_examples, seed)
        out.append({"id": test_id, "prompt": prompt})
    return out


def export_prompts(prompts: Iterable[dict], sink: IO[str]) -> int:
    n = 0
    for p in prompts:
        sink.write(json.dumps({"id": p["id"], "prompt": p["prompt"]}, ensure_ascii=False) + "\n")
        n += 1
    return n


__all__ = [
    "DatasetError", "DatasetRecord", "SplitConfig", "SplitResult", "build_fewshot_prompt",
    "build_prompts", "export_jsonl", "export_prompts", "export_training_text", "load_jsonl",
    "parse_training_text", "read_jsonl", "split", "training_text",
]
