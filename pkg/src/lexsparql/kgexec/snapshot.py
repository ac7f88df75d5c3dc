"""Immutable in-memory triple set with the indices the evaluator needs.

Snapshot files hold one triple per statement, terminated by ``.``::

    wd:L1 wikibase:lemma 'Apfel'@de .
    <http://www.wikidata.org/entity/L1> dct:language wd:Q188 .

Terms are IRIs in angle brackets, prefixed names using the Wikidata Query
Service prefixes (extra ``PREFIX`` lines are allowed), and quoted literals
with an optional language tag or ``^^`` datatype. ``#`` starts a comment.
Labels are read from ``rdfs:label`` triples.
"""

from __future__ import annotations

from collections import defaultdict
from pathlib import Path
from typing import IO, Iterable, Iterator, Optional

from ..sparqlcheck import Token, tokenize
from .errors import SnapshotError
from .terms import PREFIXES, RDF_TYPE, RDFS_LABEL, RdfTerm, expand_pname, literal_body, numeric_literal

Triple = tuple[RdfTerm, RdfTerm, RdfTerm]


class Snapshot:
    def __init__(self, triples: Iterable[Triple] = ()):
        unique = set()
        for s, p, o in triples:
            if not s.is_iri or not p.is_iri:
                raise SnapshotError(f"subject and predicate must be IRIs: {s} {p} {o}")
            unique.add((s, p, o))
        self.triples: frozenset[Triple] = frozenset(unique)
        ordered = sorted(self.triples, key=_triple_key)
        self._ordered = tuple(ordered)
        by_s, by_p, by_o = defaultdict(list), defaultdict(list), defaultdict(list)
        by_sp, by_po, by_so = defaultdict(list), defaultdict(list), defaultdict(list)
        labels: dict[tuple[str, str], str] = {}
        for t in ordered:
            s, p, o = t
            by_s[s].append(t)
            by_p[p].append(t)
            by_o[o].append(t)
            by_sp[(s, p)].append(t)
            by_po[(p, o)].append(t)
            by_so[(s, o)].append(t)
            if p.value == RDFS_LABEL and o.is_literal:
                labels.setdefault((s.value, o.language or ""), o.value)
        self._by_s, self._by_p, self._by_o = dict(by_s), dict(by_p), dict(by_o)
        self._by_sp, self._by_po, self._by_so = dict(by_sp), dict(by_po), dict(by_so)
        self.labels = labels

    def __len__(self) -> int:
        return len(self.triples)

    def __iter__(self) -> Iterator[Triple]:
        return iter(self._ordered)

    def match(self, s: Optional[RdfTerm] = None, p: Optional[RdfTerm] = None,
              o: Optional[RdfTerm] = None) -> Iterable[Triple]:
        """Triples matching the given positions; ``None`` is a wildcard."""
        if s is not None and p is not None and o is not None:
            return ((s, p, o),) if (s, p, o) in self.triples else ()
        if s is not None and p is not None:
            return self._by_sp.get((s, p), ())
        if p is not None and o is not None:
            return self._by_po.get((p, o), ())
        if s is not None and o is not None:
            return self._by_so.get((s, o), ())
        if s is not None:
            return self._by_s.get(s, ())
        if p is not None:
            return self._by_p.get(p, ())
        if o is not None:
            return self._by_o.get(o, ())
        return self._ordered

    def count(self, s=None, p=None, o=None) -> int:
        m = self.match(s, p, o)
        return len(m) if isinstance(m, (list, tuple)) else sum(1 for _ in m)

    def label(self, iri: str, language: str) -> Optional[str]:
        return self.labels.get((iri, language.lower()))

    def terms(self) -> set[RdfTerm]:
        out = set()
        for s, p, o in self.triples:
            out.update((s, p, o))
        return out

    def dump(self, sink: IO[str]) -> None:
        for s, p, o in self._ordered:
            sink.write(f"{s.n3()} {p.n3()} {o.n3()} .\n")


def _triple_key(t: Triple):
    return tuple(x.sort_key() for x in t)


class _LazyLine:
    # line numbers are only needed for error messages
    def __init__(self, text: str, offset: int):
        self.text, self.offset = text, offset

    def __str__(self) -> str:
        return str(self.text.count("\n", 0, self.offset) + 1)


def parse_term(tokens: list[Token], i: int, prefixes: dict[str, str]) -> tuple[RdfTerm, int]:
    """Read one RDF term starting at ``tokens[i]``; returns it and the next index."""
    tok = tokens[i]
    if tok.kind == "iri":
        return RdfTerm.iri(tok.text[1:-1]), i + 1
    if tok.kind == "prefixed_name":
        return RdfTerm.iri(expand_pname(tok.text, prefixes)), i + 1
    if tok.kind == "keyword" and tok.text == "a":
        return RdfTerm.iri(RDF_TYPE), i + 1
    if tok.kind == "literal":
        if tok.text[0] in "'\"":
            value = literal_body(tok.text)
            nxt = tokens[i + 1] if i + 1 < len(tokens) else None
            if nxt is not None and nxt.kind == "language_tag":
                return RdfTerm.literal(value, language=nxt.text[1:]), i + 2
            if nxt is not None and nxt.text == "^^" and i + 2 < len(tokens):
                dt, j = parse_term(tokens, i + 2, prefixes)
                if not dt.is_iri:
                    raise SnapshotError("datatype must be an IRI")
                return RdfTerm.literal(value, datatype=dt.value), j
            return RdfTerm.literal(value), i + 1
        if tok.text.lower() in ("true", "false"):
            return RdfTerm.literal(tok.text.lower(), datatype=PREFIXES["xsd"] + "boolean"), i + 1
        return numeric_literal(tok.text), i + 1
    raise SnapshotError(f"expected an RDF term, got {tok.text!r}")


def parse_snapshot(text: str) -> Snapshot:
    tokens = tokenize(text)
    prefixes = dict(PREFIXES)
    triples = []
    i = 0
    while i < len(tokens):
        tok = tokens[i]
        line = _LazyLine(text, tok.offset)
        if tok.kind == "error":
            raise SnapshotError(f"line {line}: unterminated literal")
        if tok.kind == "keyword" and tok.text.upper() == "PREFIX":
            if i + 2 >= len(tokens) or tokens[i + 1].kind != "prefixed_name" or tokens[i + 2].kind != "iri":
                raise SnapshotError(f"line {line}: malformed PREFIX declaration")
            prefixes[tokens[i + 1].text.rstrip(":")] = tokens[i + 2].text[1:-1]
            i += 3
            continue
        terms = []
        try:
            while len(terms) < 3:
                if i >= len(tokens):
                    raise SnapshotError("unexpected end of input")
                term, i = parse_term(tokens, i, prefixes)
                terms.append(term)
        except (SnapshotError, KeyError) as exc:
            raise SnapshotError(f"line {line}: {exc}") from None
        if i >= len(tokens) or tokens[i].text != ".":
            raise SnapshotError(f"line {line}: expected '.' after triple")
        i += 1
        if not terms[0].is_iri or not terms[1].is_iri:
            raise SnapshotError(f"line {line}: subject and predicate must be IRIs")
        triples.append(tuple(terms))
    return Snapshot(triples)


def load_snapshot(source: str | Path | IO[str]) -> Snapshot:
    if hasattr(source, "read"):
        return parse_snapshot(source.read())
    return parse_snapshot(Path(source).read_text(encoding="utf-8"))


def default_snapshot() -> Snapshot:
    """The desk-scale lexeme snapshot shipped with the package."""
    from importlib import resources

    ref = resources.files("lexsparql").joinpath("data").joinpath("snapshot.txt")
    return parse_snapshot(ref.read_text(encoding="utf-8"))
