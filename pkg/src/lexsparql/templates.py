"""Template catalog: loading, validation and rendering.

A catalog file holds any number of template documents::

    === q20
    paradigm: google
    output: single
    linguality: mono
    complexity: simple
    tags: word:lemma code:language_code
    provenance: attested
    --- variants
    where does the word {word} come from?
    --- sparql
    SELECT ...
    --- population
    SELECT ?lexeme ?lemma WHERE { ... }
    --- bind
    word = str(?lemma)
    code = lang(?lemma)

Section bodies are kept verbatim, trailing spaces included; only blank
lines at either end of a section are dropped.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import IO, Iterable, Iterator, Mapping, Optional

from .registry import DimensionProfile, dimension_profile_of, lexical_properties_in
from .sparqlcheck import FAIL, PROFILES, has_lexical_error, run_checks, tokenize
from .kgexec.terms import escape_literal

PARADIGMS = ("google", "property", "multi_property", "language_independent", "rule_based")
TAG_KINDS = ("lemma", "language_code", "language_qid", "property_value", "free_text")
PLACEHOLDER = re.compile(r"\{([a-z_][a-z0-9_]*)\}")
_TAG_NAME = re.compile(r"[a-z_][a-z0-9_]*")
_LANG_CODE = re.compile(r"[a-z]{2,3}(?:-[a-z0-9]+)*")
_QID = re.compile(r"Q\d+")

# stand-in values used to check that a body renders into valid tokens
_SAMPLE = {
    "lemma": "x",
    "language_code": "en",
    "language_qid": "Q1860",
    "property_value": "wd:Q1",
    "free_text": "x",
}


class TemplateError(ValueError):
    pass


class RenderError(ValueError):
    pass


@dataclass(frozen=True)
class Tag:
    name: str
    kind: str

    def __post_init__(self):
        if not _TAG_NAME.fullmatch(self.name):
            raise TemplateError(f"bad tag name {self.name!r}")
        if self.kind not in TAG_KINDS:
            raise TemplateError(f"tag {self.name}: unknown kind {self.kind!r}")


@dataclass(frozen=True)
class UtteranceTemplate:
    variants: tuple[str, ...]

    def __post_init__(self):
        if not self.variants:
            raise TemplateError("a template needs at least one utterance variant")


@dataclass(frozen=True)
class SparqlTemplate:
    body: str
    answer_shape: str  # "select" | "ask"


@dataclass(frozen=True)
class AskRule:
    """How a SELECT record is turned into a yes/no question."""
    template: str
    utterance: str
    answer_var: str
    label_var: str
    candidates: str = ""


@dataclass
class TemplateSpec:
    id: str
    paradigm: str
    dimensions: DimensionProfile
    utterance: UtteranceTemplate
    sparql: SparqlTemplate
    tag_schema: dict[str, Tag]
    properties_used: frozenset[str] = frozenset()
    provenance: str = "reconstructed"
    note: str = ""
    population: str = ""
    bind: dict[str, str] = field(default_factory=dict)
    ask_rule: Optional[AskRule] = None

    @property
    def answer_shape(self) -> str:
        return self.sparql.answer_shape

    def tags_in_body(self) -> set[str]:
        return set(PLACEHOLDER.findall(self.sparql.body))

    def tags_in_variants(self) -> set[str]:
        return {t for v in self.utterance.variants for t in PLACEHOLDER.findall(v)}


class Catalog:
    def __init__(self, specs: Iterable[TemplateSpec] = ()):
        self._specs: dict[str, TemplateSpec] = {}
        for spec in specs:
            self.add(spec)

    def add(self, spec: TemplateSpec) -> None:
        if spec.id in self._specs:
            raise TemplateError(f"duplicate template id {spec.id}")
        self._specs[spec.id] = spec

    def __len__(self) -> int:
        return len(self._specs)

    def __iter__(self) -> Iterator[TemplateSpec]:
        return iter(self._specs.values())

    def __contains__(self, template_id: str) -> bool:
        return template_id in self._specs

    def get(self, template_id: str) -> TemplateSpec:
        try:
            return self._specs[template_id]
        except KeyError:
            raise KeyError(f"unknown template {template_id}") from None

    def ids(self) -> list[str]:
        return sorted(self._specs)

    def by_paradigm(self, paradigm: str) -> list[TemplateSpec]:
        return [s for s in self if s.paradigm == paradigm]

    def counts(self) -> dict[str, int]:
        out = {p: 0 for p in PARADIGMS}
        for s in self:
            out[s.paradigm] += 1
        return out


# --- loading -----------------------------------------------------------------

_HEADER_KEYS = {"paradigm", "output", "linguality", "complexity", "tags", "provenance", "note"}
_SECTIONS = {"variants", "sparql", "population", "bind", "ask", "ask_candidates"}


def _trim_blank(lines: list[str]) -> list[str]:
    while lines and not lines[0].strip():
        lines.pop(0)
    while lines and not lines[-1].strip():
        lines.pop()
    return lines


def _split_documents(text: str) -> Iterator[tuple[int, str, list[str]]]:
    current_id = None
    start = 0
    buf: list[str] = []
    for lineno, line in enumerate(text.split("\n"), start=1):
        if line.startswith("=== "):
            if current_id is not None:
                yield start, current_id, buf
            current_id = line[4:].strip()
            start = lineno
            buf = []
        elif current_id is None:
            if line.strip() and not line.startswith("#"):
                raise TemplateError(f"line {lineno}: text outside a template document")
        else:
            buf.append(line)
    if current_id is not None:
        yield start, current_id, buf


def parse_template(template_id: str, lines: list[str], start_line: int = 1) -> TemplateSpec:
    header: dict[str, str] = {}
    sections: dict[str, list[str]] = {}
    current = None
    for offset, line in enumerate(lines, start=1):
        where = f"template {template_id}, line {start_line + offset}"
        if line.startswith("--- "):
            current = line[4:].strip()
            if current not in _SECTIONS:
                raise TemplateError(f"{where}: unknown section {current!r}")
            if current in sections:
                raise TemplateError(f"{where}: repeated section {current!r}")
            sections[current] = []
            continue
        if current is not None:
            sections[current].append(line)
            continue
        if not line.strip() or line.startswith("#"):
            continue
        key, sep, value = line.partition(":")
        key = key.strip()
        if not sep or key not in _HEADER_KEYS:
            raise TemplateError(f"{where}: expected 'key: value' header, got {line!r}")
        header[key] = value.strip()

    def need(key: str) -> str:
        if key not in header:
            raise TemplateError(f"template {template_id}: missing header {key!r}")
        return header[key]

    paradigm = need("paradigm")
    if paradigm not in PARADIGMS:
        raise TemplateError(f"template {template_id}: unknown paradigm {paradigm!r}")
    try:
        dims = DimensionProfile(need("output"), need("linguality"), need("complexity"))
    except ValueError as exc:
        raise TemplateError(f"template {template_id}: {exc}") from None

    schema: dict[str, Tag] = {}
    for item in need("tags").split():
        name, sep, kind = item.partition(":")
        if not sep:
            raise TemplateError(f"template {template_id}: tag {item!r} needs name:kind")
        try:
            tag = Tag(name, kind)
        except TemplateError as exc:
            raise TemplateError(f"template {template_id}: {exc}") from None
        if name in schema:
            raise TemplateError(f"template {template_id}: tag {name} declared twice")
        schema[name] = tag

    variants = tuple(v for v in _trim_blank(sections.get("variants", [])) if v.strip())
    body = "\n".join(_trim_blank(sections.get("sparql", [])))
    if not body:
        raise TemplateError(f"template {template_id}: empty sparql section")
    first = tokenize(body)
    shape = first[0].text.lower() if first and first[0].kind == "keyword" else ""
    if shape not in ("select", "ask"):
        raise TemplateError(f"template {template_id}: body must start with SELECT or ASK")

    bind: dict[str, str] = {}
    for line in _trim_blank(sections.get("bind", [])):
        if not line.strip():
            continue
        name, sep, expr = line.partition("=")
        if not sep:
            raise TemplateError(f"template {template_id}: bad bind line {line!r}")
        bind[name.strip()] = expr.strip()

    ask_rule = None
    if "ask" in sections:
        fields: dict[str, str] = {}
        for line in sections["ask"]:
            if line.strip():
                k, _, v = line.partition(":")
                fields[k.strip()] = v.strip()
        try:
            ask_rule = AskRule(
                template=fields["template"],
                utterance=fields["utterance"],
                answer_var=fields["answer_var"].lstrip("?"),
                label_var=fields["label_var"].lstrip("?"),
                candidates="\n".join(_trim_blank(sections.get("ask_candidates", []))),
            )
        except KeyError as exc:
            raise TemplateError(f"template {template_id}: ask rule lacks {exc.args[0]!r}") from None

    try:
        spec = TemplateSpec(
            id=template_id,
            paradigm=paradigm,
            dimensions=dims,
            utterance=UtteranceTemplate(variants),
            sparql=SparqlTemplate(body, shape),
            tag_schema=schema,
            properties_used=frozenset(lexical_properties_in(body)),
            provenance=header.get("provenance", "reconstructed"),
            note=header.get("note", ""),
            population="\n".join(_trim_blank(sections.get("population", []))),
            bind=bind,
            ask_rule=ask_rule,
        )
    except TemplateError as exc:
        raise TemplateError(f"template {template_id}: {exc}") from None
    validate_template(spec)
    return spec


def validate_template(spec: TemplateSpec) -> None:
    where = f"template {spec.id}"
    if spec.provenance not in ("attested", "reconstructed"):
        raise TemplateError(f"{where}: provenance must be attested or reconstructed")
    unknown = (spec.tags_in_body() | spec.tags_in_variants()) - set(spec.tag_schema)
    if unknown:
        raise TemplateError(f"{where}: placeholders not in tag schema: {sorted(unknown)}")
    if spec.bind:
        missing = set(spec.tag_schema) - set(spec.bind)
        if missing:
            raise TemplateError(f"{where}: no bind rule for tags {sorted(missing)}")
    if spec.ask_rule is not None:
        extra = set(PLACEHOLDER.findall(spec.ask_rule.utterance)) - set(spec.tag_schema) - {"answer_label"}
        if extra:
            raise TemplateError(f"{where}: ask utterance uses unknown tags {sorted(extra)}")
    sample = {name: _SAMPLE[tag.kind] for name, tag in spec.tag_schema.items()}
    try:
        rendered = render_query(spec, sample)
    except RenderError as exc:
        raise TemplateError(f"{where}: {exc}") from None
    report = run_checks(rendered, PROFILES["gold_lint"])
    failed = [cid for cid, outcome in report.results.items() if outcome == FAIL]
    if failed:
        raise TemplateError(f"{where}: rendered body fails structural checks {failed}")
    try:
        dimension_profile_of(spec)
    except ValueError as exc:
        raise TemplateError(str(exc)) from None


def load_catalog(source: IO[str] | str) -> Catalog:
    text = source if isinstance(source, str) else source.read()
    catalog = Catalog()
    for start, template_id, lines in _split_documents(text):
        catalog.add(parse_template(template_id, lines, start))
    return catalog


def load_catalog_dir(path: str | Path) -> Catalog:
    catalog = Catalog()
    files = sorted(Path(path).glob("*.tpl"))
    if not files:
        raise TemplateError(f"no .tpl files under {path}")
    for f in files:
        try:
            part = load_catalog(f.read_text(encoding="utf-8"))
        except TemplateError as exc:
            raise TemplateError(f"{f.name}: {exc}") from None
        for spec in part:
            catalog.add(spec)
    return catalog


def default_catalog_path() -> Path:
    return Path(str(resources.files("lexsparql").joinpath("data").joinpath("catalog")))


def default_catalog() -> Catalog:
    return load_catalog_dir(default_catalog_path())


# --- rendering ---------------------------------------------------------------

def _substitute(text: str, values: Mapping[str, str], what: str) -> str:
    def repl(m: re.Match) -> str:
        name = m.group(1)
        if name not in values:
            raise RenderError(f"missing binding for tag {name!r} in {what}")
        return values[name]

    return PLACEHOLDER.sub(repl, text)


def render_utterance(spec: TemplateSpec, bindings: Mapping[str, str], variant_index: int) -> str:
    variants = spec.utterance.variants
    if not 0 <= variant_index < len(variants):
        raise RenderError(f"variant index {variant_index} out of range for {spec.id} ({len(variants)} variants)")
    return _substitute(variants[variant_index], bindings, f"utterance of {spec.id}")


def _sparql_value(tag: Tag, raw: str) -> str:
    if tag.kind in ("lemma", "free_text"):
        return escape_literal(raw)
    if tag.kind == "language_code":
        if not _LANG_CODE.fullmatch(raw):
            raise RenderError(f"tag {tag.name}: {raw!r} is not a lowercase language code")
        return raw
    if tag.kind == "language_qid":
        if not _QID.fullmatch(raw):
            raise RenderError(f"tag {tag.name}: {raw!r} is not an item id")
        return raw
    tokens = tokenize(raw)
    kinds = [t.kind for t in tokens]
    single = kinds in (["iri"], ["prefixed_name"], ["literal"], ["literal", "language_tag"]) or (
        len(tokens) == 3 and kinds[0] == "literal" and tokens[1].text == "^^"
        and kinds[2] in ("iri", "prefixed_name")
    )
    if not single:
        raise RenderError(f"tag {tag.name}: {raw!r} is not a single SPARQL term")
    return raw


def render_query(spec: TemplateSpec, bindings: Mapping[str, str]) -> str:
    values = {}
    for name in spec.tags_in_body():
        if name not in bindings:
            raise RenderError(f"missing binding for tag {name!r} in query of {spec.id}")
        values[name] = _sparql_value(spec.tag_schema[name], bindings[name])
    text = _substitute(spec.sparql.body, values, f"query of {spec.id}")
    if has_lexical_error(tokenize(text)):
        raise RenderError(f"rendered query of {spec.id} does not tokenize")
    return text


def pick_variant(spec: TemplateSpec, rng_seed: int, record_index: int) -> int:
    n = len(spec.utterance.variants)
    if n == 1:
        return 0
    digest = hashlib.sha256(f"{rng_seed}\x00{spec.id}\x00{record_index}".encode()).digest()
    return int.from_bytes(digest[:8], "big") % n


__all__ = [
    "AskRule", "Catalog", "PARADIGMS", "PLACEHOLDER", "RenderError", "SparqlTemplate", "TAG_KINDS",
    "Tag", "TemplateError", "TemplateSpec", "UtteranceTemplate", "default_catalog",
    "default_catalog_path", "dimension_profile_of", "load_catalog", "load_catalog_dir",
    "parse_template", "pick_variant", "render_query", "render_utterance", "validate_template",
]
