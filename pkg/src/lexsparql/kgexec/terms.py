from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

PREFIXES = {
    "wd": "http://www.wikidata.org/entity/",
    "wdt": "http://www.wikidata.org/prop/direct/",
    "wikibase": "http://wikiba.se/ontology#",
    "bd": "http://www.bigdata.com/rdf#",
    "dct": "http://purl.org/dc/terms/",
    "ontolex": "http://www.w3.org/ns/lemon/ontolex#",
    "rdfs": "http://www.w3.org/2000/01/rdf-schema#",
    "rdf": "http://www.w3.org/1999/02/22-rdf-syntax-ns#",
    "skos": "http://www.w3.org/2004/02/skos/core#",
    "schema": "http://schema.org/",
    "xsd": "http://www.w3.org/2001/XMLSchema#",
    "p": "http://www.wikidata.org/prop/",
    "ps": "http://www.wikidata.org/prop/statement/",
    "pq": "http://www.wikidata.org/prop/qualifier/",
}

XSD = PREFIXES["xsd"]
XSD_STRING = XSD + "string"
XSD_INTEGER = XSD + "integer"
XSD_DECIMAL = XSD + "decimal"
XSD_DOUBLE = XSD + "double"
XSD_BOOLEAN = XSD + "boolean"
RDF_TYPE = PREFIXES["rdf"] + "type"
RDFS_LABEL = PREFIXES["rdfs"] + "label"

NUMERIC_TYPES = frozenset({XSD_INTEGER, XSD_DECIMAL, XSD_DOUBLE, XSD + "int", XSD + "float", XSD + "long"})

_ESCAPES = {"t": "\t", "n": "\n", "r": "\r", "b": "\b", "f": "\f", '"': '"', "'": "'", "\\": "\\"}


@dataclass(frozen=True)
class RdfTerm:
    kind: str  # "iri" | "literal"
    value: str
    language: Optional[str] = None
    datatype: Optional[str] = None

    def __post_init__(self):
        if self.kind not in ("iri", "literal"):
            raise ValueError(f"bad term kind {self.kind!r}")
        if self.kind == "iri" and (self.language or self.datatype):
            raise ValueError("IRIs carry neither language nor datatype")
        if self.language is not None:
            object.__setattr__(self, "language", self.language.lower())
        if self.datatype == XSD_STRING:
            object.__setattr__(self, "datatype", None)

    @classmethod
    def iri(cls, value: str) -> "RdfTerm":
        return cls("iri", value)

    @classmethod
    def literal(cls, value: str, language: str | None = None, datatype: str | None = None) -> "RdfTerm":
        return cls("literal", value, language, datatype)

    @property
    def is_iri(self) -> bool:
        return self.kind == "iri"

    @property
    def is_literal(self) -> bool:
        return self.kind == "literal"

    @property
    def is_numeric(self) -> bool:
        return self.kind == "literal" and self.datatype in NUMERIC_TYPES

    def numeric_value(self) -> float:
        return float(self.value)

    @property
    def local_name(self) -> str:
        """Last path or fragment segment of an IRI (``Q188`` for wd:Q188)."""
        return re.split(r"[/#]", self.value)[-1] if self.is_iri else self.value

    def n3(self) -> str:
        """SPARQL surface syntax, using the well-known prefixes when possible."""
        if self.is_iri:
            for prefix, ns in PREFIXES.items():
                if self.value.startswith(ns):
                    local = self.value[len(ns):]
                    if re.fullmatch(r"[\w\-]+(?:\.[\w\-]+)*", local):
                        return f"{prefix}:{local}"
            return f"<{self.value}>"
        text = "'" + escape_literal(self.value) + "'"
        if self.language:
            return f"{text}@{self.language}"
        if self.datatype:
            return f"{text}^^{RdfTerm.iri(self.datatype).n3()}"
        return text

    def to_json(self) -> dict:
        if self.is_iri:
            return {"type": "uri", "value": self.value}
        doc = {"type": "literal", "value": self.value}
        if self.language:
            doc["xml:lang"] = self.language
        elif self.datatype:
            doc["datatype"] = self.datatype
        return doc

    @classmethod
    def from_json(cls, doc: dict) -> "RdfTerm":
        kind = doc.get("type")
        if kind == "uri":
            return cls.iri(doc["value"])
        if kind in ("literal", "typed-literal"):
            return cls.literal(doc["value"], doc.get("xml:lang"), doc.get("datatype"))
        if kind == "bnode":
            return cls.iri("_:" + doc["value"])
        raise ValueError(f"unknown term type {kind!r}")

    def sort_key(self) -> tuple:
        return (self.kind, self.value, self.language or "", self.datatype or "")

    def __str__(self) -> str:
        return self.n3()


def escape_literal(text: str) -> str:
    """Backslash-escape quotes and backslashes for a quoted SPARQL literal."""
    return (
        text.replace("\\", "\\\\")
        .replace("'", "\\'")
        .replace('"', '\\"')
        .replace("\n", "\\n")
        .replace("\r", "\\r")
    )


def unescape_literal(body: str) -> str:
    out = []
    i = 0
    while i < len(body):
        ch = body[i]
        if ch == "\\" and i + 1 < len(body):
            nxt = body[i + 1]
            if nxt in _ESCAPES:
                out.append(_ESCAPES[nxt])
                i += 2
                continue
            if nxt == "u" and re.fullmatch(r"[0-9A-Fa-f]{4}", body[i + 2:i + 6]):
                out.append(chr(int(body[i + 2:i + 6], 16)))
                i += 6
                continue
        out.append(ch)
        i += 1
    return "".join(out)


def literal_body(token_text: str) -> str:
    """Strip the quotes from a literal token and resolve its escapes."""
    if token_text[:3] in ("'''", '"""'):
        return unescape_literal(token_text[3:-3])
    return unescape_literal(token_text[1:-1])


def expand_pname(pname: str, prefixes: dict[str, str]) -> str:
    prefix, local = pname.split(":", 1)
    try:
        return prefixes[prefix] + local
    except KeyError:
        raise KeyError(f"undeclared prefix {prefix!r}") from None


def numeric_literal(text: str) -> RdfTerm:
    if re.fullmatch(r"\d+", text):
        return RdfTerm.literal(text, datatype=XSD_INTEGER)
    if "e" in text.lower():
        return RdfTerm.literal(text, datatype=XSD_DOUBLE)
    return RdfTerm.literal(text, datatype=XSD_DECIMAL)


def wd(local: str) -> RdfTerm:
    return RdfTerm.iri(PREFIXES["wd"] + local)
