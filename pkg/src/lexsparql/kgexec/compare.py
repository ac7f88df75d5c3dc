from __future__ import annotations

from dataclasses import dataclass

from .results import ResultSet


@dataclass(frozen=True)
class Containment:
    ok: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def compare_results(generated: ResultSet, gold: ResultSet, strict: bool = False) -> Containment:
    """Does ``generated`` include every answer in ``gold``?

    By default each gold row's values must all appear in some single
    generated row, ignoring variable names. With ``strict`` the comparison
    is aligned by variable name instead. Rows are treated as sets, so
    duplicates never matter.
    """
    if generated.kind != gold.kind:
        return Containment(False, "shape mismatch")
    if gold.kind == "boolean":
        if generated.truth == gold.truth:
            return Containment(True)
        return Containment(False, "boolean differs")
    if strict:
        have = generated.row_set()
        for row in gold.row_set():
            if not any(row <= g for g in have):
                return Containment(False, "missing gold row")
        return Containment(True)
    have_values = {frozenset(r.values()) for r in generated.rows}
    for row in gold.rows:
        values = frozenset(row.values())
        if not any(values <= g for g in have_values):
            return Containment(False, "missing gold row")
    return Containment(True)


def contains_expected(generated: ResultSet, gold: ResultSet, strict: bool = False) -> bool:
    return compare_results(generated, gold, strict).ok
