from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from .errors import MalformedResults
from .terms import RdfTerm

Row = dict[str, RdfTerm]


@dataclass
class ResultSet:
    kind: str  # "bindings" | "boolean"
    variables: list[str] = field(default_factory=list)
    rows: list[Row] = field(default_factory=list)
    truth: Optional[bool] = None

    def __post_init__(self):
        if self.kind not in ("bindings", "boolean"):
            raise ValueError(f"bad result kind {self.kind!r}")
        if self.kind == "boolean" and self.truth is None:
            raise ValueError("boolean results need a truth value")
        known = set(self.variables)
        for row in self.rows:
            extra = set(row) - known
            if extra:
                raise ValueError(f"row binds undeclared variables {sorted(extra)}")

    @classmethod
    def boolean(cls, truth: bool) -> "ResultSet":
        return cls("boolean", truth=bool(truth))

    @classmethod
    def bindings(cls, variables: list[str], rows: list[Row]) -> "ResultSet":
        return cls("bindings", list(variables), [dict(r) for r in rows])

    def __len__(self) -> int:
        return len(self.rows)

    def is_empty(self) -> bool:
        return not self.truth if self.kind == "boolean" else not self.rows

    def row_set(self) -> set[frozenset]:
        return {frozenset(r.items()) for r in self.rows}

    def to_json(self) -> dict:
        if self.kind == "boolean":
            return {"head": {}, "boolean": self.truth}
        return {
            "head": {"vars": list(self.variables)},
            "results": {
                "bindings": [{k: v.to_json() for k, v in row.items()} for row in self.rows]
            },
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), ensure_ascii=False, sort_keys=True)

    @classmethod
    def from_json(cls, doc) -> "ResultSet":
        """Parse a SPARQL 1.1 JSON results document."""
        if not isinstance(doc, dict):
            raise MalformedResults("results document is not an object")
        if "boolean" in doc:
            if not isinstance(doc["boolean"], bool):
                raise MalformedResults("'boolean' is not a JSON boolean")
            return cls.boolean(doc["boolean"])
        try:
            variables = list(doc["head"].get("vars", []))
            raw_rows = doc["results"]["bindings"]
            rows = []
            for raw in raw_rows:
                rows.append({k: RdfTerm.from_json(v) for k, v in raw.items()})
        except (KeyError, TypeError, AttributeError, ValueError) as exc:
            raise MalformedResults(f"malformed results document: {exc}") from None
        for row in rows:
            for name in row:
                if name not in variables:
                    variables.append(name)
        return cls.bindings(variables, rows)

    @classmethod
    def loads(cls, text: str) -> "ResultSet":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise MalformedResults(f"results are not JSON: {exc}") from None
        return cls.from_json(doc)
