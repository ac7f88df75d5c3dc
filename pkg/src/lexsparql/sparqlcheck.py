"""SPARQL tokenizer and the structural granularity checks.

The tokenizer is deliberately forgiving: it never raises, and anything it
cannot make sense of becomes an ``error`` or ``other`` token. The checks
run on the token stream so that keywords hidden in literals or comments do
not count.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

KEYWORDS = frozenset(
    """
    select ask construct describe where prefix base distinct reduced from named
    filter optional values service order by asc desc limit offset union minus
    bind as group having graph not exists in undef a
    str lang langmatches datatype bound iri uri isiri isuri isblank isliteral
    isnumeric regex strlen substr ucase lcase strstarts strends contains
    strbefore strafter concat replace abs ceil floor round count sum min max
    avg sample group_concat coalesce if sameterm
    """.split()
)

TOKEN_KINDS = (
    "keyword",
    "variable",
    "iri",
    "prefixed_name",
    "literal",
    "language_tag",
    "brace_open",
    "brace_close",
    "paren",
    "punctuation",
    "other",
    "error",
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    offset: int

    @property
    def end(self) -> int:
        return self.offset + len(self.text)


_PNAME = (
    r"(?:[A-Za-z][\w\-]*(?:\.[\w\-]+)*)?:"
    r"(?:[\w\-:%]+(?:\.[\w\-:%]+)*)?"
)

_RULES: list[tuple[str, re.Pattern[str]]] = [
    ("ws", re.compile(r"\s+")),
    ("comment", re.compile(r"#[^\n]*")),
    ("long_literal", re.compile(r"'''(?:[^'\\]|\\.|'(?!''))*'''|\"\"\"(?:[^\"\\]|\\.|\"(?!\"\"))*\"\"\"", re.S)),
    ("literal", re.compile(r"'(?:[^'\\\n\r]|\\.)*'|\"(?:[^\"\\\n\r]|\\.)*\"")),
    ("language_tag", re.compile(r"@[A-Za-z]+(?:-[A-Za-z0-9]+)*")),
    ("iri", re.compile(r"<[^<>\"{}|^`\\\s]*>")),
    ("variable", re.compile(r"[?$]\w+")),
    ("prefixed_name", re.compile(_PNAME)),
    ("number", re.compile(r"\d+(?:\.\d+)?(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?")),
    ("word", re.compile(r"[A-Za-z_]\w*")),
    ("punctuation", re.compile(r"\^\^|&&|\|\||!=|<=|>=|[.;,*=<>!+\-/\[\]|^]")),
]


def tokenize(text: str) -> list[Token]:
    """Split SPARQL text into tokens.

    Whitespace and ``#`` comments are dropped; the offsets of the remaining
    tokens let the caller recover the original text. An unterminated string
    literal turns the rest of the input into one ``error`` token.
    """
    tokens: list[Token] = []
    pos = 0
    n = len(text)
    while pos < n:
        ch = text[pos]
        if ch == "{":
            tokens.append(Token("brace_open", ch, pos))
            pos += 1
            continue
        if ch == "}":
            tokens.append(Token("brace_close", ch, pos))
            pos += 1
            continue
        if ch in "()":
            tokens.append(Token("paren", ch, pos))
            pos += 1
            continue
        if ch in "'\"":
            m = _RULES[2][1].match(text, pos) or _RULES[3][1].match(text, pos)
            if m is None:
                tokens.append(Token("error", text[pos:], pos))
                break
            tokens.append(Token("literal", m.group(), pos))
            pos = m.end()
            continue
        for name, rx in _RULES:
            if name in ("long_literal", "literal"):
                continue
            if name == "language_tag" and not (tokens and tokens[-1].kind == "literal" and tokens[-1].end == pos):
                continue
            m = rx.match(text, pos)
            if m is None or not m.group():
                continue
            value = m.group()
            if name in ("ws", "comment"):
                pass
            elif name == "number":
                tokens.append(Token("literal", value, pos))
            elif name == "word":
                low = value.lower()
                if low in ("true", "false"):
                    tokens.append(Token("literal", value, pos))
                elif low in KEYWORDS:
                    tokens.append(Token("keyword", value, pos))
                else:
                    tokens.append(Token("other", value, pos))
            else:
                tokens.append(Token(name, value, pos))
            pos = m.end()
            break
        else:
            tokens.append(Token("other", ch, pos))
            pos += 1
    return tokens


def has_lexical_error(tokens: Iterable[Token]) -> bool:
    return any(t.kind == "error" for t in tokens)


# --- granularity checks -----------------------------------------------------

CHECK_IDS = ("C1", "C2", "C3", "C4", "C5", "C6", "C7")
CHECK_DESCRIPTIONS = {
    "C1": "starts with SELECT or ASK",
    "C2": "SELECT has a variable before WHERE",
    "C3": "ASK is directly followed by WHERE",
    "C4": "every { has a matching }",
    "C5": "no VALUES keyword",
    "C6": "uses a known variable",
    "C7": "no unknown Q-items",
}

PASS = "pass"
FAIL = "fail"
NOT_APPLICABLE = "not_applicable"

DEFAULT_KNOWN_VARIABLES = frozenset(
    {"?lexeme", "?lemma", "?form", "?sense", "?qitem", "?qitemlabel"}
)

_QID = re.compile(r"Q\d+")


@dataclass(frozen=True)
class CheckProfile:
    enabled_checks: frozenset[str] = frozenset(CHECK_IDS)
    known_variables: frozenset[str] = DEFAULT_KNOWN_VARIABLES
    known_qitems: frozenset[str] = frozenset()
    allow_prefix_prologue: bool = False

    def __post_init__(self):
        unknown = set(self.enabled_checks) - set(CHECK_IDS)
        if unknown:
            raise ValueError(f"unknown check ids: {sorted(unknown)}")
        normalized = frozenset(
            ("?" + v.lstrip("?$")).lower() for v in self.known_variables
        )
        object.__setattr__(self, "enabled_checks", frozenset(self.enabled_checks))
        object.__setattr__(self, "known_variables", normalized)
        object.__setattr__(self, "known_qitems", frozenset(self.known_qitems))

    def with_known_qitems(self, qitems: Iterable[str]) -> "CheckProfile":
        return CheckProfile(
            self.enabled_checks,
            self.known_variables,
            self.known_qitems | frozenset(qitems),
            self.allow_prefix_prologue,
        )


PROFILES = {
    # model outputs, both scenarios
    "appendix_c": CheckProfile(),
    # gold queries legitimately carry VALUES and fixed Q-items
    "gold_lint": CheckProfile(enabled_checks=frozenset({"C1", "C2", "C3", "C4", "C6"})),
}


def get_profile(name: str) -> CheckProfile:
    try:
        return PROFILES[name]
    except KeyError:
        raise ValueError(f"unknown check profile {name!r}; choose from {sorted(PROFILES)}") from None


@dataclass(frozen=True)
class CheckReport:
    results: dict[str, str] = field(default_factory=dict)

    @property
    def c_pass(self) -> int:
        return sum(1 for r in self.results.values() if r == PASS)

    @property
    def c_all(self) -> int:
        return sum(1 for r in self.results.values() if r in (PASS, FAIL))

    @property
    def ratio(self) -> Fraction:
        return granularity_ratio(self)

    def to_dict(self) -> dict:
        return {
            "results": dict(self.results),
            "c_pass": self.c_pass,
            "c_all": self.c_all,
            "ratio": str(self.ratio),
        }


def granularity_ratio(report: CheckReport) -> Fraction:
    """Passed checks over performed checks; 0 when nothing was performed."""
    if report.c_all == 0:
        return Fraction(0)
    return Fraction(report.c_pass, report.c_all)


def _skip_prologue(tokens: list[Token]) -> int:
    i = 0
    while i < len(tokens) and tokens[i].kind == "keyword":
        word = tokens[i].text.lower()
        if word == "prefix" and i + 2 < len(tokens) and tokens[i + 2].kind == "iri":
            i += 3
        elif word == "base" and i + 1 < len(tokens) and tokens[i + 1].kind == "iri":
            i += 2
        else:
            break
    return i


def _mentions_qitem(tok: Token) -> str | None:
    if tok.kind == "prefixed_name":
        local = tok.text.split(":", 1)[1]
    elif tok.kind == "iri":
        local = re.split(r"[/#]", tok.text[1:-1])[-1]
    elif tok.kind == "other":
        local = tok.text
    else:
        return None
    return local if _QID.fullmatch(local) else None


def qitems_in(text: str) -> set[str]:
    """Q-identifiers mentioned by ``text`` as names, IRIs or bare words."""
    found = set()
    for tok in tokenize(text):
        q = _mentions_qitem(tok)
        if q:
            found.add(q)
    return found


def run_checks(text: str, profile: CheckProfile = PROFILES["appendix_c"]) -> CheckReport:
    tokens = tokenize(text)
    start = _skip_prologue(tokens) if profile.allow_prefix_prologue else 0
    first = tokens[start] if start < len(tokens) else None
    form = None
    if first is not None and first.kind == "keyword" and first.text.lower() in ("select", "ask"):
        form = first.text.lower()

    outcome: dict[str, str] = {}

    outcome["C1"] = PASS if form else FAIL

    if form == "select":
        ok = False
        for tok in tokens[start + 1:]:
            if tok.kind == "keyword" and tok.text.lower() == "where":
                break
            if tok.kind == "brace_open":
                break
            if tok.kind == "variable":
                ok = True
                break
        outcome["C2"] = PASS if ok else FAIL
    else:
        outcome["C2"] = NOT_APPLICABLE

    if form == "ask":
        nxt = tokens[start + 1] if start + 1 < len(tokens) else None
        ok = nxt is not None and (
            nxt.kind == "brace_open" or (nxt.kind == "keyword" and nxt.text.lower() == "where")
        )
        outcome["C3"] = PASS if ok else FAIL
    else:
        outcome["C3"] = NOT_APPLICABLE

    depth = 0
    balanced = True
    for tok in tokens:
        if tok.kind == "brace_open":
            depth += 1
        elif tok.kind == "brace_close":
            depth -= 1
            if depth < 0:
                balanced = False
                break
    outcome["C4"] = PASS if balanced and depth == 0 else FAIL

    has_values = any(t.kind == "keyword" and t.text.lower() == "values" for t in tokens)
    outcome["C5"] = FAIL if has_values else PASS

    known = any(
        t.kind == "variable" and ("?" + t.text[1:]).lower() in profile.known_variables
        for t in tokens
    )
    outcome["C6"] = PASS if known else FAIL

    unknown_q = [q for q in (_mentions_qitem(t) for t in tokens) if q and q not in profile.known_qitems]
    outcome["C7"] = FAIL if unknown_q else PASS

    results = {cid: outcome[cid] for cid in CHECK_IDS if cid in profile.enabled_checks}
    return CheckReport(results)
