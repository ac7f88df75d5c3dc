"""Populating templates: fetch tag bindings from an endpoint, then materialize records."""

from __future__ import annotations

import logging
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import IO, Callable, Iterable, Mapping, Optional, Protocol

from .dataset import DatasetRecord
from .kgexec.remote import EndpointConfig, EndpointLimits, RemoteExecutor
from .kgexec.results import ResultSet
from .kgexec.terms import RdfTerm
from .templates import Catalog, RenderError, TemplateSpec, pick_variant, render_query, render_utterance

log = logging.getLogger(__name__)

PAGE_SIZE = 10_000


class PopulationError(RuntimeError):
    pass


class Executor(Protocol):
    def execute(self, query: str) -> ResultSet: ...

    def describe(self) -> str: ...


@dataclass(frozen=True)
class PopulationRow:
    bindings: Mapping[str, str]
    source_template: str

    def key(self) -> tuple:
        return tuple(sorted(self.bindings.items()))


class PopulationRows(list):
    """Rows for one template plus what happened while fetching them."""

    def __init__(self, rows: Iterable[PopulationRow] = (), truncated: bool = False,
                 requests: int = 0, notice: str = ""):
        super().__init__(rows)
        self.truncated = truncated
        self.requests = requests
        self.notice = notice


# --- bind expressions -------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<var>\?[A-Za-z_][A-Za-z0-9_]*)|(?P<int>-?\d+)|(?P<name>[a-z_]+)|(?P<punct>[(),]))")


class BindError(ValueError):
    pass


@dataclass(frozen=True)
class _Call:
    name: str
    args: tuple


def parse_bind(text: str):
    """Parse a bind expression such as ``slice(str(?lemma), 0, 3)``."""
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise BindError(f"bad bind expression {text!r} at {pos}")
        tokens.append((m.lastgroup, m.group(m.lastgroup)))
        pos = m.end()

    def expr(i):
        if i >= len(tokens):
            raise BindError(f"unexpected end of {text!r}")
        kind, value = tokens[i]
        if kind == "var":
            return value[1:], i + 1
        if kind == "int":
            return int(value), i + 1
        if kind != "name" or i + 1 >= len(tokens) or tokens[i + 1] != ("punct", "("):
            raise BindError(f"bad bind expression {text!r}")
        if value not in BIND_FUNCTIONS:
            raise BindError(f"unknown bind function {value!r}")
        args = []
        i += 2
        while tokens[i:i + 1] != [("punct", ")")]:
            arg, i = expr(i)
            args.append(arg)
            if tokens[i:i + 1] == [("punct", ",")]:
                i += 1
            elif tokens[i:i + 1] != [("punct", ")")]:
                raise BindError(f"expected , or ) in {text!r}")
        return _Call(value, tuple(args)), i + 1

    node, end = expr(0)
    if end != len(tokens):
        raise BindError(f"trailing input in {text!r}")
    return node


def _as_text(v) -> str:
    if isinstance(v, RdfTerm):
        return v.value
    return str(v)


def _slice(v, start, stop=None):
    return _as_text(v)[start:stop]


BIND_FUNCTIONS: dict[str, Callable] = {
    "str": _as_text,
    "lang": lambda t: (t.language or "") if isinstance(t, RdfTerm) else "",
    "local": lambda t: t.local_name if isinstance(t, RdfTerm) else str(t),
    "term": lambda t: t.n3() if isinstance(t, RdfTerm) else str(t),
    "slice": _slice,
    "regex_escape": lambda v: re.sub(r"([\\.^$|?*+()\[\]{}])", r"\\\1", _as_text(v)),
    "lower": lambda v: _as_text(v).lower(),
}


class _Unbound(Exception):
    pass


def eval_bind(node, row: Mapping[str, RdfTerm]):
    if isinstance(node, str):
        if node not in row:
            raise _Unbound(node)
        return row[node]
    if isinstance(node, int):
        return node
    return BIND_FUNCTIONS[node.name](*(eval_bind(a, row) for a in node.args))


def bind_row(spec: TemplateSpec, row: Mapping[str, RdfTerm], compiled=None) -> Optional[dict[str, str]]:
    """Tag values for one result row; None if the row cannot fill the schema."""
    compiled = compiled or {name: parse_bind(expr) for name, expr in spec.bind.items()}
    out = {}
    for name, node in compiled.items():
        try:
            value = _as_text(eval_bind(node, row))
        except _Unbound:
            return None
        if not value and spec.tag_schema[name].kind == "lemma":
            return None
        out[name] = value
    return out


# --- fetching ---------------------------------------------------------------

_TAIL = re.compile(r"\b(ORDER\s+BY|LIMIT|OFFSET)\b", re.IGNORECASE)


def paged_query(population: str, variables: list[str], limit: int, offset: int) -> str:
    """The population query with a stable order and one page window appended."""
    body = population.rstrip()
    if _TAIL.search(body[body.rfind("}"):] if "}" in body else body):
        raise PopulationError("population queries must not carry their own ORDER BY/LIMIT/OFFSET")
    order = " ".join("?" + v for v in variables)
    text = f"{body}\nORDER BY {order}\nLIMIT {limit}"
    if offset:
        text += f"\nOFFSET {offset}"
    return text


def _projected(population: str) -> list[str]:
    head = re.search(r"SELECT\s+(?:DISTINCT\s+)?(.*?)\s*WHERE", population, re.IGNORECASE | re.DOTALL)
    if not head or head.group(1).strip() == "*":
        raise PopulationError("population query must project explicit variables")
    return [v[1:] for v in head.group(1).split()]


def fetch_population(spec: TemplateSpec, endpoint, limits: Optional[EndpointLimits] = None,
                     page_size: int = PAGE_SIZE) -> PopulationRows:
    """Fetch deduplicated tag bindings for one template.

    ``endpoint`` is an EndpointConfig or anything with ``execute(query)``.
    Pages are ordered on every projected variable, and the row cap applies
    to the union of pages.
    """
    if not spec.population:
        raise PopulationError(f"template {spec.id} has no population query")
    if isinstance(endpoint, EndpointConfig):
        limits = limits or endpoint.limits
        endpoint = RemoteExecutor(endpoint)
    limits = limits or EndpointLimits()
    cap = limits.max_rows_per_query
    size = min(page_size, cap)
    variables = _projected(spec.population)
    compiled = {name: parse_bind(expr) for name, expr in spec.bind.items()}

    raw: list[dict] = []
    requests = 0
    truncated = False
    while len(raw) < cap:
        want = min(size, cap - len(raw))
        result = endpoint.execute(paged_query(spec.population, variables, want, len(raw)))
        requests += 1
        if result.kind != "bindings":
            raise PopulationError(f"template {spec.id}: population query returned a boolean")
        if len(result.rows) > want:
            raise PopulationError(
                f"template {spec.id}: endpoint returned {len(result.rows)} rows for LIMIT {want}; "
                "cannot paginate under the row cap"
            )
        raw.extend(result.rows)
        if len(result.rows) < want:
            break
    else:
        probe = endpoint.execute(paged_query(spec.population, variables, 1, cap))
        requests += 1
        truncated = bool(probe.rows)

    seen = set()
    rows = []
    for result_row in raw:
        bindings = bind_row(spec, result_row, compiled)
        if bindings is None:
            continue
        row = PopulationRow(bindings, spec.id)
        if row.key() in seen:
            continue
        seen.add(row.key())
        rows.append(row)
    notice = ""
    if truncated:
        notice = f"template {spec.id}: population truncated at {cap} rows"
        log.warning(notice)
    return PopulationRows(rows, truncated=truncated, requests=requests, notice=notice)


def fetch_catalog(catalog: Catalog, endpoint, limits: Optional[EndpointLimits] = None,
                  template_ids: Optional[Iterable[str]] = None, workers: int = 1) -> dict[str, PopulationRows]:
    """Populate many templates; workers share the endpoint's rate limiter."""
    if isinstance(endpoint, EndpointConfig):
        limits = limits or endpoint.limits
        endpoint = RemoteExecutor(endpoint)
    ids = list(template_ids) if template_ids is not None else catalog.ids()
    specs = [catalog.get(i) for i in ids]
    if workers <= 1:
        return {s.id: fetch_population(s, endpoint, limits) for s in specs}
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = {s.id: pool.submit(fetch_population, s, endpoint, limits) for s in specs}
        return {i: futures[i].result() for i in ids}


# --- manifest ---------------------------------------------------------------

def write_manifest(sink: IO[str], endpoint: str, rows_by_template: Mapping[str, list],
                   limits: Optional[EndpointLimits] = None, timestamp: Optional[datetime] = None) -> None:
    limits = limits or EndpointLimits()
    timestamp = timestamp or datetime.now(timezone.utc)
    sink.write(f"endpoint = {endpoint}\n")
    sink.write(f"timestamp = {timestamp.isoformat()}\n")
    sink.write(f"max_rows = {limits.max_rows_per_query}\n")
    sink.write("cap_scope = per-template union of pages\n")
    sink.write(f"page_size = {PAGE_SIZE}\n")
    for tid in sorted(rows_by_template):
        rows = rows_by_template[tid]
        flag = " truncated" if getattr(rows, "truncated", False) else ""
        sink.write(f"rows.{tid} = {len(rows)}{flag}\n")


def read_manifest(source: IO[str]) -> dict[str, str]:
    out = {}
    for line in source:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition(" = ")
        if not sep:
            raise ValueError(f"bad manifest line {line!r}")
        out[key] = value
    return out


# --- records ----------------------------------------------------------------

def build_dataset(catalog: Catalog, rows_by_template: Mapping[str, list[PopulationRow]],
                  seed: int) -> list[DatasetRecord]:
    records = []
    for tid in sorted(rows_by_template):
        if tid not in catalog:
            raise KeyError(f"rows given for unknown template {tid}")
        spec = catalog.get(tid)
        for i, row in enumerate(rows_by_template[tid]):
            try:
                utterance = render_utterance(spec, row.bindings, pick_variant(spec, seed, i))
                query = render_query(spec, row.bindings)
            except RenderError as exc:
                raise RenderError(f"template {tid}, row {i}: {exc}") from None
            records.append(DatasetRecord(utterance, tid, query))
    return records


__all__ = [
    "BindError", "PAGE_SIZE", "PopulationError", "PopulationRow", "PopulationRows", "bind_row",
    "build_dataset", "eval_bind", "fetch_catalog", "fetch_population", "paged_query", "parse_bind",
    "read_manifest", "write_manifest",
]
