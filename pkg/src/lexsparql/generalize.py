"""The generalization scenario: yes/no rewrites of SELECT records and shape hold-outs."""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import IO, Iterable, Mapping, Optional, Sequence

from .dataset import DatasetRecord, SplitResult
from .kgexec.results import ResultSet
from .kgexec.terms import RdfTerm, unescape_literal
from .templates import PLACEHOLDER, Catalog, TemplateSpec, default_catalog, render_query


class GeneralizationError(ValueError):
    pass


@dataclass(frozen=True)
class GeneralizationRecord:
    base_record_id: str
    utterance: str
    query: str
    expected_truth: bool
    answer_value: RdfTerm
    template_name: str = ""

    def to_record(self) -> DatasetRecord:
        return DatasetRecord(self.utterance, self.template_name, self.query)

    def to_json(self) -> dict:
        return {"id": self.base_record_id, "utterance": self.utterance, "query": self.query,
                "expected_truth": self.expected_truth, "template_name": self.template_name}


# --- recovering tag values from a rendered record ---------------------------

_QUOTED = r"(?:[^'\"\\\n]|\\.)*"
_TERM = (
    r"(?:'(?:[^'\\]|\\.)*'|\"(?:[^\"\\]|\\.)*\")(?:@[A-Za-z]+(?:-[A-Za-z0-9]+)*|\^\^\S+)?"
    r"|<[^<>\s]*>|[A-Za-z][\w-]*:[\w.-]*[\w-]|[A-Za-z][\w-]*:"
)
_KIND_PATTERN = {
    "lemma": _QUOTED,
    "free_text": _QUOTED,
    "language_code": r"[a-z]{2,3}(?:-[a-z0-9]+)*",
    "language_qid": r"Q\d+",
    "property_value": _TERM,
}


def _pattern(text: str, group_for) -> re.Pattern:
    parts = []
    seen = set()
    pos = 0
    for m in PLACEHOLDER.finditer(text):
        parts.append(re.escape(text[pos:m.start()]))
        name = m.group(1)
        if name in seen:
            parts.append(f"(?P={name})")
        else:
            seen.add(name)
            parts.append(group_for(name))
        pos = m.end()
    parts.append(re.escape(text[pos:]))
    return re.compile("".join(parts), re.DOTALL)


def recover_bindings(spec: TemplateSpec, record: DatasetRecord) -> dict[str, str]:
    """Tag values that render ``record`` under ``spec``, from its query and utterance."""
    body = _pattern(spec.sparql.body, lambda n: f"(?P<{n}>{_KIND_PATTERN[spec.tag_schema[n].kind]})")
    m = body.fullmatch(record.query)
    if not m:
        raise GeneralizationError(f"query of record does not match template {spec.id}")
    values = {}
    for name, raw in m.groupdict().items():
        kind = spec.tag_schema[name].kind
        values[name] = unescape_literal(raw) if kind in ("lemma", "free_text") else raw
    for variant in spec.utterance.variants:
        def group(name):
            if name in values:
                return re.escape(values[name])
            return f"(?P<{name}>.+?)"
        um = _pattern(variant, group).fullmatch(record.utterance)
        if um:
            return {**values, **um.groupdict()}
    raise GeneralizationError(f"utterance of record matches no variant of {spec.id}")


# --- rewriting ---------------------------------------------------------------

@lru_cache(maxsize=1)
def _packaged_catalog() -> Catalog:
    return default_catalog()


def to_ask(record: DatasetRecord, spec: TemplateSpec, answer_value: RdfTerm, answer_label: str,
           negate: bool, catalog: Optional[Catalog] = None, base_record_id: str = "") -> GeneralizationRecord:
    """Yes/no version of a SELECT record that names ``answer_value`` as the answer."""
    rule = spec.ask_rule
    if rule is None:
        raise GeneralizationError(f"template {spec.id} has no ASK rewrite rule")
    catalog = catalog if catalog is not None else _packaged_catalog()
    ask_spec = catalog.get(rule.template)
    bindings = recover_bindings(spec, record)
    bindings["answer"] = answer_value.n3()
    bindings["answer_label"] = answer_label

    def fill(m):
        return bindings[m.group(1)]

    utterance = PLACEHOLDER.sub(fill, rule.utterance)
    query = render_query(ask_spec, bindings)
    return GeneralizationRecord(base_record_id or record.template_name, utterance, query,
                                not negate, answer_value, ask_spec.id)


def _pick(seed: int, key: str, n: int) -> int:
    digest = hashlib.sha256(f"{seed}\x00{key}".encode()).digest()
    return int.from_bytes(digest[:8], "big") % n


def _label(row: Mapping[str, RdfTerm], value: RdfTerm, label_var: str) -> str:
    term = row.get(label_var)
    if term is not None:
        return term.value
    return value.local_name if value.is_iri else value.value


def sample_answer(spec: TemplateSpec, gold: ResultSet, seed: int, key: str) -> tuple[RdfTerm, str]:
    rule = spec.ask_rule
    answer_var, label_var = rule.answer_var.lstrip("?"), rule.label_var.lstrip("?")
    rows = sorted((r for r in gold.rows if answer_var in r),
                  key=lambda r: (r[answer_var].sort_key(), _label(r, r[answer_var], label_var)))
    if not rows:
        raise GeneralizationError(f"no answer to sample for {key}: gold result is empty")
    row = rows[_pick(seed, key, len(rows))]
    return row[answer_var], _label(row, row[answer_var], label_var)


def sample_non_answer(spec: TemplateSpec, gold: ResultSet, candidates: ResultSet, seed: int,
                      key: str) -> tuple[RdfTerm, str]:
    """A value of the same type that is not among the gold answers or their labels."""
    rule = spec.ask_rule
    answer_var, label_var = rule.answer_var.lstrip("?"), rule.label_var.lstrip("?")
    answers = {r[answer_var] for r in gold.rows if answer_var in r}
    labels = {_label(r, r[answer_var], label_var) for r in gold.rows if answer_var in r}
    pool = {}
    for r in candidates.rows:
        value = r.get("answer")
        if value is None or value in answers:
            continue
        label = _label(r, value, "answerLabel")
        if label in labels:
            continue
        pool.setdefault(value, label)
    if not pool:
        raise GeneralizationError(f"no non-answer candidates for {key}")
    ordered = sorted(pool.items(), key=lambda kv: (kv[0].sort_key(), kv[1]))
    return ordered[_pick(seed, "neg\x00" + key, len(ordered))]


def make_generalization_set(catalog: Catalog, records: Sequence[DatasetRecord], executor, seed: int = 0,
                            record_ids: Optional[Sequence[str]] = None, verify: bool = True,
                            ) -> list[GeneralizationRecord]:
    """One positive and one negative yes/no record per rewritable SELECT record.

    Records whose template has no rule, or whose answers cannot be sampled,
    are skipped. With ``verify`` every produced query is executed and its
    truth value must equal ``expected_truth``.
    """
    ids = list(record_ids) if record_ids is not None else [f"{r.template_name}#{i}" for i, r in enumerate(records)]
    out = []
    candidate_cache: dict[str, ResultSet] = {}
    for rid, record in zip(ids, records):
        spec = catalog.get(record.template_name)
        if spec.ask_rule is None or spec.answer_shape != "select":
            continue
        gold = executor.execute(record.query)
        if spec.id not in candidate_cache:
            candidate_cache[spec.id] = executor.execute(spec.ask_rule.candidates)
        try:
            pos_value, pos_label = sample_answer(spec, gold, seed, rid)
            neg_value, neg_label = sample_non_answer(spec, gold, candidate_cache[spec.id], seed, rid)
        except GeneralizationError:
            continue
        pair = [
            to_ask(record, spec, pos_value, pos_label, False, catalog, rid + "+"),
            to_ask(record, spec, neg_value, neg_label, True, catalog, rid + "-"),
        ]
        if verify:
            for g in pair:
                truth = executor.execute(g.query).truth
                if truth != g.expected_truth:
                    raise GeneralizationError(
                        f"{g.base_record_id}: ASK evaluates {truth}, expected {g.expected_truth}"
                    )
        out.extend(pair)
    return out


def holdout_by_shape(catalog: Catalog, records: Sequence[DatasetRecord], held_shape: str,
                     transformed: Iterable[GeneralizationRecord] = ()) -> SplitResult:
    """Train on every other shape; test on native and transformed records of ``held_shape``."""
    shapes = {s.answer_shape for s in catalog}
    if held_shape not in shapes:
        raise GeneralizationError(f"no template in the catalog has answer shape {held_shape!r}")
    train, test, test_ids = [], [], []
    counts: dict[str, list[int]] = {}
    for i, r in enumerate(records):
        spec = catalog.get(r.template_name)
        c = counts.setdefault(r.template_name, [0, 0])
        if spec.answer_shape == held_shape:
            test.append(r)
            test_ids.append(f"{r.template_name}#{c[1]}")
            c[1] += 1
        else:
            train.append(r)
            c[0] += 1
    for g in transformed:
        if catalog.get(g.template_name).answer_shape != held_shape:
            raise GeneralizationError(f"transformed record {g.base_record_id} is not of shape {held_shape}")
        test.append(g.to_record())
        test_ids.append(g.base_record_id)
        counts.setdefault(g.template_name, [0, 0])[1] += 1
    return SplitResult(train, test, {k: tuple(v) for k, v in counts.items()}, test_ids)


def export_generalization(records: Iterable[GeneralizationRecord], sink: IO[str]) -> int:
    n = 0
    for g in records:
        sink.write(json.dumps(g.to_json(), ensure_ascii=False) + "\n")
        n += 1
    return n


__all__ = [
    "GeneralizationError", "GeneralizationRecord", "export_generalization", "holdout_by_shape",
    "make_generalization_set", "recover_bindings", "sample_answer", "sample_non_answer", "to_ask",
]
