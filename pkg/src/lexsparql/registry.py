"""Reference data: lexicographic properties, their categories, and languages."""

from __future__ import annotations

import csv
import re
from dataclasses import dataclass, field
from importlib import resources
from typing import IO, Iterable, Iterator, Optional

CATEGORIES = (
    "Linguistic",
    "Historical",
    "Syntactic",
    "Semantic",
    "OrthographicPhonetic",
    "Translation",
    "Stylistic",
)
ATTACHMENTS = ("lexeme", "sense", "form")
RANGE_KINDS = ("string", "q_item", "lexeme", "monolingual_text", "sense", "form")

OUTPUT_ARITIES = ("single", "multi")
LINGUALITIES = ("mono", "multi")
COMPLEXITIES = ("simple", "complex")

_PID = re.compile(r"P\d+")
_QID = re.compile(r"Q\d+")
_WDT_PROPERTY = re.compile(r"\bwdt:(P\d+)\b")


class RegistryError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


@dataclass(frozen=True)
class PropertyDescriptor:
    pid: str
    label: str
    category: str
    attachment: str
    range_kind: str

    def __post_init__(self):
        if not _PID.fullmatch(self.pid):
            raise RegistryError(f"bad property id {self.pid!r}")
        if self.category not in CATEGORIES:
            raise RegistryError(f"unknown category {self.category!r}")
        if self.attachment not in ATTACHMENTS:
            raise RegistryError(f"unknown attachment {self.attachment!r}")
        if self.range_kind not in RANGE_KINDS:
            raise RegistryError(f"unknown range kind {self.range_kind!r}")


@dataclass(frozen=True)
class LanguageRef:
    qid: str
    code: str
    label: str

    def __post_init__(self):
        if not _QID.fullmatch(self.qid or ""):
            raise RegistryError(f"bad language item {self.qid!r}")
        if not self.code or self.code != self.code.lower():
            raise RegistryError(f"language code must be non-empty lowercase, got {self.code!r}")


@dataclass(frozen=True)
class DimensionProfile:
    output_arity: str
    linguality: str
    complexity: str

    def __post_init__(self):
        if self.output_arity not in OUTPUT_ARITIES:
            raise ValueError(f"bad output arity {self.output_arity!r}")
        if self.linguality not in LINGUALITIES:
            raise ValueError(f"bad linguality {self.linguality!r}")
        if self.complexity not in COMPLEXITIES:
            raise ValueError(f"bad complexity {self.complexity!r}")


class DimensionMismatch(ValueError):
    pass


def lexical_properties_in(body: str) -> set[str]:
    return set(_WDT_PROPERTY.findall(body))


def dimension_profile_of(template) -> DimensionProfile:
    """Declared profile of a template, after checking D4 against its body.

    A template with two or more distinct ``wdt:`` properties is complex;
    anything with fewer is simple.
    """
    profile = template.dimensions
    count = len(lexical_properties_in(template.sparql.body))
    expected = "complex" if count >= 2 else "simple"
    if profile.complexity != expected:
        raise DimensionMismatch(
            f"template {template.id}: declared {profile.complexity} but body uses "
            f"{count} lexical properties"
        )
    return profile


@dataclass
class Registry:
    properties: dict[str, PropertyDescriptor] = field(default_factory=dict)
    languages: dict[str, LanguageRef] = field(default_factory=dict)
    pool: dict[str, str] = field(default_factory=dict)

    def __contains__(self, pid: str) -> bool:
        return pid in self.properties

    def __len__(self) -> int:
        return len(self.properties)

    def __iter__(self) -> Iterator[PropertyDescriptor]:
        return iter(self.properties.values())

    def get(self, pid: str) -> PropertyDescriptor:
        try:
            return self.properties[pid]
        except KeyError:
            raise KeyError(f"unknown property {pid}") from None

    def by_category(self, category: str) -> list[PropertyDescriptor]:
        return [p for p in self.properties.values() if p.category == category]

    def language(self, key: str) -> LanguageRef:
        """Look a language up by code, item id, or English label."""
        if key in self.languages:
            return self.languages[key]
        for ref in self.languages.values():
            if key in (ref.qid, ref.label):
                return ref
        raise KeyError(f"unknown language {key!r}")


def classify_property(registry: Registry, pid: str) -> str:
    return registry.get(pid).category


def _rows(source: IO[str], header: tuple[str, ...]) -> Iterator[tuple[int, dict[str, str]]]:
    lines = [(n, line) for n, line in enumerate(source, start=1)
             if line.strip() and not line.lstrip().startswith("#")]
    if not lines:
        return
    reader = csv.reader([line for _, line in lines], skipinitialspace=True)
    first = True
    for (lineno, _), cells in zip(lines, reader):
        cells = [c.strip() for c in cells]
        if first:
            first = False
            if tuple(cells) != header:
                raise RegistryError(f"expected header {','.join(header)}", lineno)
            continue
        if len(cells) != len(header):
            raise RegistryError(f"expected {len(header)} fields, got {len(cells)}", lineno)
        yield lineno, dict(zip(header, cells))


def load_registry(source: IO[str], languages: Optional[IO[str]] = None,
                  pool: Optional[IO[str]] = None) -> Registry:
    reg = Registry()
    for lineno, row in _rows(source, ("pid", "label", "category", "attachment", "range_kind")):
        try:
            desc = PropertyDescriptor(**row)
        except RegistryError as exc:
            raise RegistryError(str(exc), lineno) from None
        if desc.pid in reg.properties:
            raise RegistryError(f"duplicate property {desc.pid}", lineno)
        reg.properties[desc.pid] = desc
    if languages is not None:
        reg.languages = load_languages(languages)
    reg.pool = {p.pid: p.label for p in reg.properties.values()}
    if pool is not None:
        reg.pool.update(load_pool(pool))
    return reg


def load_languages(source: IO[str]) -> dict[str, LanguageRef]:
    out: dict[str, LanguageRef] = {}
    for lineno, row in _rows(source, ("qid", "code", "label")):
        try:
            ref = LanguageRef(**row)
        except RegistryError as exc:
            raise RegistryError(str(exc), lineno) from None
        if ref.code in out:
            raise RegistryError(f"duplicate language code {ref.code}", lineno)
        out[ref.code] = ref
    return out


def load_pool(source: IO[str]) -> dict[str, str]:
    out: dict[str, str] = {}
    for lineno, row in _rows(source, ("pid", "label")):
        if not _PID.fullmatch(row["pid"]):
            raise RegistryError(f"bad property id {row['pid']!r}", lineno)
        out[row["pid"]] = row["label"]
    return out


def _data(name: str):
    return resources.files("lexsparql").joinpath("data").joinpath(name)


def default_registry() -> Registry:
    with _data("registry.csv").open(encoding="utf-8") as reg, \
            _data("languages.csv").open(encoding="utf-8") as langs, \
            _data("pool.csv").open(encoding="utf-8") as pool:
        return load_registry(reg, langs, pool)


def load_registry_path(path, languages_path=None, pool_path=None) -> Registry:
    def _open(p):
        return open(p, encoding="utf-8") if p is not None else None

    handles = [_open(p) for p in (path, languages_path, pool_path)]
    try:
        return load_registry(*handles)
    finally:
        for h in handles:
            if h is not None:
                h.close()


def unregistered(pids: Iterable[str], registry: Registry) -> set[str]:
    return {p for p in pids if p not in registry}
