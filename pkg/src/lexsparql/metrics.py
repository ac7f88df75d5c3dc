"""Evaluation metrics: pass@k, granularity ratios and corpus BLEU."""

from __future__ import annotations

import json
import math
import re
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .dataset import DatasetRecord
from .kgexec.compare import compare_results
from .kgexec.errors import QueryError
from .kgexec.results import ResultSet
from .sparqlcheck import PROFILES, CheckProfile, qitems_in, run_checks

SCENARIOS = ("non_generalization", "generalization")
BLEU_SIGNATURE = "nrefs:1|case:mixed|eff:no|tok:13a|smooth:exp"
MAX_NGRAM = 4


class MetricsError(ValueError):
    pass


def pass_at_k(correct_flags: Sequence[bool]) -> Fraction:
    if not correct_flags:
        raise MetricsError("pass@k needs at least one response")
    return Fraction(sum(1 for f in correct_flags if f), len(correct_flags))


# --- BLEU -------------------------------------------------------------------

_13A_RULES = [
    (re.compile(r"([\{-\~\[-\` -\&\(-\+\:-\@\/])"), r" \1 "),
    (re.compile(r"([^0-9])([\.,])"), r"\1 \2 "),
    (re.compile(r"([\.,])([^0-9])"), r" \1 \2"),
    (re.compile(r"([0-9])(-)"), r"\1 \2 "),
]


def tokenize_13a(line: str) -> list[str]:
    line = line.replace("<skipped>", "").replace("-\n", "").replace("\n", " ")
    if "&" in line:
        line = (line.replace("&quot;", '"').replace("&amp;", "&")
                .replace("&lt;", "<").replace("&gt;", ">"))
    line = f" {line} "
    for pattern, repl in _13A_RULES:
        line = pattern.sub(repl, line)
    return line.split()


def _ngrams(tokens: list[str], n: int) -> Counter:
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


@dataclass(frozen=True)
class BleuStats:
    correct: tuple[int, ...]
    total: tuple[int, ...]
    sys_len: int
    ref_len: int


def bleu_stats(candidates: Sequence[str], references: Sequence[str]) -> BleuStats:
    if len(candidates) != len(references):
        raise MetricsError(f"{len(candidates)} candidates but {len(references)} references")
    correct = [0] * MAX_NGRAM
    total = [0] * MAX_NGRAM
    sys_len = ref_len = 0
    for cand, ref in zip(candidates, references):
        c = tokenize_13a(cand.rstrip())
        r = tokenize_13a(ref.rstrip())
        sys_len += len(c)
        ref_len += len(r)
        for n in range(1, MAX_NGRAM + 1):
            cn, rn = _ngrams(c, n), _ngrams(r, n)
            correct[n - 1] += sum(min(k, rn[g]) for g, k in cn.items())
            total[n - 1] += max(0, len(c) - n + 1)
    return BleuStats(tuple(correct), tuple(total), sys_len, ref_len)


def bleu_from_stats(stats: BleuStats) -> float:
    """Exponentially smoothed BLEU over all four orders, scaled to [0, 100]."""
    if stats.sys_len < stats.ref_len:
        bp = math.exp(1 - stats.ref_len / stats.sys_len) if stats.sys_len > 0 else 0.0
    else:
        bp = 1.0
    if not any(stats.correct):
        return 0.0
    precisions = [0.0] * MAX_NGRAM
    smooth = 1.0
    for n in range(1, MAX_NGRAM + 1):
        if stats.total[n - 1] == 0:
            break
        if stats.correct[n - 1] == 0:
            smooth *= 2
            precisions[n - 1] = 100.0 / (smooth * stats.total[n - 1])
        else:
            precisions[n - 1] = 100.0 * stats.correct[n - 1] / stats.total[n - 1]
    # a zero precision stands for log(0); the score collapses to zero
    if any(p == 0.0 for p in precisions):
        return 0.0
    return bp * math.exp(sum(math.log(p) for p in precisions) / MAX_NGRAM)


def bleu_corpus(candidates: Sequence[str], references: Sequence[str]) -> float:
    return bleu_from_stats(bleu_stats(candidates, references))


# --- per-record evaluation --------------------------------------------------

_FENCE = re.compile(r"<code>(.*?)</code>", re.DOTALL)
_FENCE_OPEN = re.compile(r"<code>(.*)", re.DOTALL)
_QUERY_START = re.compile(r"\b(SELECT|ASK)\b", re.IGNORECASE)


def extract_sparql(response: str) -> str:
    """The query inside a model response: the code fence, else from the first SELECT/ASK."""
    m = _FENCE.search(response) or _FENCE_OPEN.search(response)
    if m:
        return m.group(1).strip()
    m = _QUERY_START.search(response)
    if m:
        return response[m.start():].strip()
    return response.strip()


@dataclass
class RecordEvaluation:
    record_id: str
    responses: list[str]
    correct_flags: list[bool] = field(default_factory=list)
    granularity_ratios: list[Fraction] = field(default_factory=list)
    reasons: list[str] = field(default_factory=list)
    gold_query: str = ""
    voided: bool = False
    void_reason: str = ""

    @property
    def pass_at_k(self) -> Fraction:
        return pass_at_k(self.correct_flags)

    @property
    def granularity(self) -> Fraction:
        if not self.granularity_ratios:
            return Fraction(0)
        return sum(self.granularity_ratios, Fraction(0)) / len(self.granularity_ratios)

    @property
    def bleu_inputs(self) -> tuple[str, str]:
        return extract_sparql(self.responses[0]), self.gold_query

    def to_json(self) -> dict:
        doc = {"id": self.record_id, "voided": self.voided}
        if self.voided:
            doc["void_reason"] = self.void_reason
            return doc
        doc.update({
            "correct": self.correct_flags,
            "pass_at_k": str(self.pass_at_k),
            "granularity": str(self.granularity),
            "reasons": self.reasons,
        })
        return doc


def evaluate_record(gold: DatasetRecord, responses: Sequence[str], executor,
                    check_profile: CheckProfile = PROFILES["appendix_c"],
                    record_id: str = "", gold_result: Optional[ResultSet] = None) -> RecordEvaluation:
    """Run each response, compare with the gold answers, and score its structure.

    Q-items mentioned by the gold query count as known for the Q-item check.
    """
    if not responses:
        raise MetricsError("evaluate_record needs at least one response")
    ev = RecordEvaluation(record_id or gold.template_name, list(responses), gold_query=gold.query)
    if gold_result is None:
        try:
            gold_result = executor.execute(gold.query)
        except QueryError as exc:
            ev.voided = True
            ev.void_reason = f"gold query failed: {exc}"
            return ev
    profile = check_profile.with_known_qitems(qitems_in(gold.query))
    for response in responses:
        text = extract_sparql(response)
        ev.granularity_ratios.append(run_checks(text, profile).ratio)
        try:
            generated = executor.execute(text)
        except QueryError as exc:
            ev.correct_flags.append(False)
            ev.reasons.append(f"execution failed: {exc}")
            continue
        verdict = compare_results(generated, gold_result)
        ev.correct_flags.append(verdict.ok)
        ev.reasons.append(verdict.reason)
    return ev


# --- aggregation ------------------------------------------------------------

@dataclass
class AggregateReport:
    scenario: str
    k: int
    mean_pass_at_k: Fraction
    mean_granularity: Fraction
    corpus_bleu: float
    n_records: int
    n_voided: int
    bleu_mode: str = "first"

    def to_json(self) -> dict:
        return {
            "scenario": self.scenario,
            "k": self.k,
            "mean_pass_at_k": float(self.mean_pass_at_k),
            "mean_pass_at_k_exact": str(self.mean_pass_at_k),
            "mean_granularity": float(self.mean_granularity),
            "mean_granularity_exact": str(self.mean_granularity),
            "corpus_bleu": self.corpus_bleu,
            "bleu_signature": BLEU_SIGNATURE,
            "bleu_mode": self.bleu_mode,
            "n_records": self.n_records,
            "n_voided": self.n_voided,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "AggregateReport":
        return cls(
            scenario=doc["scenario"],
            k=int(doc["k"]),
            mean_pass_at_k=Fraction(doc.get("mean_pass_at_k_exact", doc["mean_pass_at_k"])),
            mean_granularity=Fraction(doc.get("mean_granularity_exact", doc["mean_granularity"])),
            corpus_bleu=float(doc["corpus_bleu"]),
            n_records=int(doc["n_records"]),
            n_voided=int(doc["n_voided"]),
            bleu_mode=doc.get("bleu_mode", "first"),
        )


def _best_bleu_pair(ev: RecordEvaluation) -> tuple[str, str]:
    scored = [(bleu_corpus([extract_sparql(r)], [ev.gold_query]), i) for i, r in enumerate(ev.responses)]
    best = max(scored, key=lambda s: (s[0], -s[1]))[1]
    return extract_sparql(ev.responses[best]), ev.gold_query


def aggregate(evals: Iterable[RecordEvaluation], scenario: str, k: int,
              bleu_mode: str = "first") -> AggregateReport:
    if scenario not in SCENARIOS:
        raise MetricsError(f"unknown scenario {scenario!r}")
    if bleu_mode not in ("first", "best"):
        raise MetricsError(f"unknown BLEU mode {bleu_mode!r}")
    evals = list(evals)
    kept = [e for e in evals if not e.voided]
    if not kept:
        raise MetricsError("every record was voided")
    pairs = [e.bleu_inputs if bleu_mode == "first" else _best_bleu_pair(e) for e in kept]
    return AggregateReport(
        scenario=scenario,
        k=k,
        mean_pass_at_k=sum((e.pass_at_k for e in kept), Fraction(0)) / len(kept),
        mean_granularity=sum((e.granularity for e in kept), Fraction(0)) / len(kept),
        corpus_bleu=bleu_corpus([c for c, _ in pairs], [r for _, r in pairs]),
        n_records=len(kept),
        n_voided=len(evals) - len(kept),
        bleu_mode=bleu_mode,
    )


def format_report(reports: Iterable[AggregateReport], model: str = "predictions") -> str:
    """Plain-text table with one pass@k / R_granularity / BLEU block per scenario."""
    reports = list(reports)
    by_key: dict[int, dict[str, AggregateReport]] = {}
    for r in reports:
        by_key.setdefault(r.k, {})[r.scenario] = r
    head1 = f"{'Model':<14}{'Parameter':<11}" + "".join(
        f"{'Non-Generalization' if s == SCENARIOS[0] else 'Generalization':<30}" for s in SCENARIOS
    )
    head2 = " " * 25 + f"{'pass@k':>8}{'R_gran':>9}{'BLEU':>8}     " * 2
    lines = [head1.rstrip(), head2.rstrip()]
    for k in sorted(by_key):
        cells = []
        for s in SCENARIOS:
            r = by_key[k].get(s)
            if r is None:
                cells.append(f"{'-':>8}{'-':>9}{'-':>8}     ")
            else:
                cells.append(f"{float(r.mean_pass_at_k):>8.2f}{float(r.mean_granularity):>9.2f}"
                             f"{r.corpus_bleu:>8.1f}     ")
        lines.append((f"{model:<14}{'k=' + str(k):<11}" + "".join(cells)).rstrip())
    return "\n".join(lines) + "\n"


def write_report_json(reports: Iterable[AggregateReport]) -> str:
    return json.dumps([r.to_json() for r in reports], indent=2, sort_keys=True) + "\n"


__all__ = [
    "AggregateReport", "BLEU_SIGNATURE", "BleuStats", "MetricsError", "RecordEvaluation",
    "SCENARIOS", "aggregate", "bleu_corpus", "bleu_from_stats", "bleu_stats", "evaluate_record",
    "extract_sparql", "format_report", "pass_at_k", "tokenize_13a", "write_report_json",
]
