"""Recursive-descent parser for the SPARQL subset the local evaluator runs.

Anything outside the subset raises :class:`UnsupportedFeature` naming the
construct, so callers can tell "we don't do that" apart from "that is not
SPARQL" (:class:`ParseError`).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from ..sparqlcheck import Token, tokenize
from .errors import ParseError, UnsupportedFeature
from .terms import PREFIXES, RDF_TYPE, XSD_BOOLEAN, RdfTerm, expand_pname, literal_body, numeric_literal


@dataclass(frozen=True)
class Var:
    name: str


Node = Union[Var, RdfTerm]


@dataclass(frozen=True)
class TriplePattern:
    s: Node
    p: Node
    o: Node

    def variables(self) -> list[str]:
        return [x.name for x in (self.s, self.p, self.o) if isinstance(x, Var)]


@dataclass
class ValuesBlock:
    variables: list[str]
    rows: list[tuple[Optional[RdfTerm], ...]]


@dataclass
class Call:
    name: str  # upper-cased builtin name
    args: list


@dataclass
class BinOp:
    op: str
    left: object
    right: object


@dataclass
class Not:
    operand: object


@dataclass
class Filter:
    expr: object


@dataclass
class OptionalBlock:
    group: "Group"


@dataclass
class LabelService:
    languages: list[str]
    # explicit ``?x rdfs:label ?xLabel`` lines inside the service block
    explicit: list[tuple[str, str]] = field(default_factory=list)


@dataclass
class Group:
    elements: list = field(default_factory=list)


@dataclass
class OrderKey:
    expr: object
    descending: bool = False


@dataclass
class Query:
    form: str  # "select" | "ask"
    projection: Optional[list[str]]  # None means SELECT *
    distinct: bool
    where: Group
    order_by: list[OrderKey]
    limit: Optional[int]
    offset: int
    variables_in_order: list[str]

    @property
    def label_variables(self) -> list[str]:
        return [v for v in self.variables_in_order if v.endswith("Label") and len(v) > 5]


SUPPORTED_FUNCTIONS = {
    "STR": 1, "LANG": 1, "LANGMATCHES": 2, "STRLEN": 1, "REGEX": (2, 3),
    "CONTAINS": 2, "STRSTARTS": 2, "STRENDS": 2, "LCASE": 1, "UCASE": 1,
    "BOUND": 1, "ISIRI": 1, "ISURI": 1, "ISLITERAL": 1, "SAMETERM": 2,
}

_UNSUPPORTED_GROUP_KEYWORDS = {"minus": "MINUS", "bind": "BIND", "graph": "GRAPH", "union": "UNION"}
_COMPARISONS = ("=", "!=", "<", ">", "<=", ">=")
_LABEL_SERVICE = "http://wikiba.se/ontology#label"
_SERVICE_PARAM = "http://www.bigdata.com/rdf#serviceParam"
_LANGUAGE_PARAM = "http://wikiba.se/ontology#language"


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        for tok in self.tokens:
            if tok.kind == "error":
                raise ParseError(f"unterminated literal at offset {tok.offset}")
        self.i = 0
        self.prefixes = dict(PREFIXES)
        self.var_order: list[str] = []

    # -- token helpers ------------------------------------------------------

    def peek(self, ahead: int = 0) -> Optional[Token]:
        j = self.i + ahead
        return self.tokens[j] if j < len(self.tokens) else None

    def at_keyword(self, *words: str, ahead: int = 0) -> bool:
        tok = self.peek(ahead)
        return tok is not None and tok.kind == "keyword" and tok.text.lower() in words

    def at_text(self, *texts: str, ahead: int = 0) -> bool:
        tok = self.peek(ahead)
        return tok is not None and tok.kind != "literal" and tok.text in texts

    def next(self) -> Token:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of query")
        self.i += 1
        return tok

    def expect(self, text: str) -> Token:
        tok = self.next()
        if tok.text != text or tok.kind == "literal":
            raise ParseError(f"expected {text!r} at offset {tok.offset}, got {tok.text!r}")
        return tok

    def expect_keyword(self, word: str) -> Token:
        tok = self.next()
        if tok.kind != "keyword" or tok.text.lower() != word:
            raise ParseError(f"expected {word.upper()} at offset {tok.offset}, got {tok.text!r}")
        return tok

    def note_var(self, name: str) -> Var:
        if name not in self.var_order:
            self.var_order.append(name)
        return Var(name)

    # -- query --------------------------------------------------------------

    def parse(self) -> Query:
        while self.at_keyword("prefix", "base"):
            tok = self.next()
            if tok.text.lower() == "base":
                raise UnsupportedFeature("BASE")
            name, iri = self.next(), self.next()
            if name.kind != "prefixed_name" or not name.text.endswith(":") or iri.kind != "iri":
                raise ParseError(f"malformed PREFIX declaration at offset {tok.offset}")
            self.prefixes[name.text[:-1]] = iri.text[1:-1]

        tok = self.next()
        word = tok.text.lower() if tok.kind == "keyword" else ""
        if word in ("construct", "describe"):
            raise UnsupportedFeature(word.upper())
        if word not in ("select", "ask"):
            raise ParseError(f"expected SELECT or ASK at offset {tok.offset}, got {tok.text!r}")

        projection: Optional[list[str]] = None
        distinct = False
        if word == "select":
            if self.at_keyword("distinct", "reduced"):
                distinct = self.next().text.lower() == "distinct"
            if self.at_text("*"):
                self.next()
            else:
                projection = []
                while True:
                    nxt = self.peek()
                    if nxt is not None and nxt.kind == "variable":
                        projection.append(self.note_var(self.next().text[1:]).name)
                    elif nxt is not None and nxt.text == "(":
                        raise UnsupportedFeature("SELECT expressions")
                    else:
                        break
                if not projection:
                    raise ParseError("SELECT without projected variables")
        if self.at_keyword("from"):
            raise UnsupportedFeature("FROM")
        if self.at_keyword("where"):
            self.next()
        where = self.group()

        order_by: list[OrderKey] = []
        limit: Optional[int] = None
        offset = 0
        if self.at_keyword("group"):
            raise UnsupportedFeature("GROUP BY")
        if self.at_keyword("having"):
            raise UnsupportedFeature("HAVING")
        if self.at_keyword("order"):
            self.next()
            self.expect_keyword("by")
            order_by = self.order_keys()
        while self.at_keyword("limit", "offset"):
            which = self.next().text.lower()
            num = self.next()
            if num.kind != "literal" or not num.text.isdigit():
                raise ParseError(f"{which.upper()} needs a non-negative integer")
            if which == "limit":
                limit = int(num.text)
            else:
                offset = int(num.text)
        if self.at_keyword("values"):
            raise UnsupportedFeature("trailing VALUES")
        if self.peek() is not None:
            tok = self.peek()
            raise ParseError(f"unexpected {tok.text!r} at offset {tok.offset}")
        return Query(word, projection, distinct, where, order_by, limit, offset, list(self.var_order))

    def order_keys(self) -> list[OrderKey]:
        keys = []
        while True:
            if self.at_keyword("asc", "desc"):
                desc = self.next().text.lower() == "desc"
                self.expect("(")
                expr = self.expression()
                self.expect(")")
                keys.append(OrderKey(expr, desc))
            elif self.peek() is not None and self.peek().kind == "variable":
                keys.append(OrderKey(self.note_var(self.next().text[1:])))
            elif self.at_text("("):
                self.next()
                expr = self.expression()
                self.expect(")")
                keys.append(OrderKey(expr))
            elif self.peek() is not None and self.peek().kind == "keyword" and self.at_text("(", ahead=1):
                keys.append(OrderKey(self.primary()))
            else:
                break
        if not keys:
            raise ParseError("ORDER BY without keys")
        return keys

    # -- graph patterns -----------------------------------------------------

    def group(self) -> Group:
        self.expect("{")
        elements: list = []
        while True:
            tok = self.peek()
            if tok is None:
                raise ParseError("unbalanced braces: missing '}'")
            if tok.kind == "brace_close":
                self.next()
                break
            if tok.kind == "brace_open":
                elements.append(self.group())
                if self.at_keyword("union"):
                    raise UnsupportedFeature("UNION")
                continue
            if tok.text == "." and tok.kind == "punctuation":
                self.next()
                continue
            if tok.kind == "keyword":
                word = tok.text.lower()
                if word == "optional":
                    self.next()
                    elements.append(OptionalBlock(self.group()))
                    continue
                if word == "filter":
                    self.next()
                    elements.append(Filter(self.filter_constraint()))
                    continue
                if word == "values":
                    self.next()
                    elements.append(self.values_block())
                    continue
                if word == "service":
                    self.next()
                    elements.append(self.service())
                    continue
                if word in _UNSUPPORTED_GROUP_KEYWORDS:
                    raise UnsupportedFeature(_UNSUPPORTED_GROUP_KEYWORDS[word])
                if word == "select":
                    raise UnsupportedFeature("subqueries")
            elements.extend(self.triples_block())
        return Group(elements)

    def filter_constraint(self):
        if self.at_keyword("not", "exists"):
            raise UnsupportedFeature("EXISTS")
        if self.at_text("("):
            self.next()
            expr = self.expression()
            self.expect(")")
            return expr
        tok = self.peek()
        if tok is not None and tok.kind in ("keyword", "prefixed_name"):
            return self.primary()
        raise ParseError("FILTER needs a bracketed expression or a function call")

    def values_block(self) -> ValuesBlock:
        if self.at_text("("):
            self.next()
            names = []
            while self.peek() is not None and self.peek().kind == "variable":
                names.append(self.note_var(self.next().text[1:]).name)
            self.expect(")")
            if len(names) != 1:
                raise UnsupportedFeature("multi-variable VALUES")
            self.expect("{")
            rows = []
            while not self.at_text("}"):
                self.expect("(")
                rows.append((self.values_term(),))
                self.expect(")")
            self.expect("}")
            return ValuesBlock(names, rows)
        tok = self.next()
        if tok.kind != "variable":
            raise ParseError(f"VALUES needs a variable at offset {tok.offset}")
        name = self.note_var(tok.text[1:]).name
        self.expect("{")
        rows = []
        while not (self.peek() is not None and self.peek().kind == "brace_close"):
            rows.append((self.values_term(),))
        self.expect("}")
        return ValuesBlock([name], rows)

    def values_term(self) -> Optional[RdfTerm]:
        if self.at_keyword("undef"):
            self.next()
            return None
        term = self.node()
        if isinstance(term, Var):
            raise ParseError("variables are not allowed inside VALUES data")
        return term

    def service(self) -> LabelService:
        if self.peek() is not None and self.peek().text.lower() == "silent":
            self.next()
        tok = self.next()
        iri = self.resolve_iri(tok)
        if iri != _LABEL_SERVICE:
            raise UnsupportedFeature(f"SERVICE <{iri}>")
        self.expect("{")
        languages: list[str] = []
        explicit: list[tuple[str, str]] = []
        while not (self.peek() is not None and self.peek().kind == "brace_close"):
            if self.at_text("."):
                self.next()
                continue
            for tp in self.triples_block():
                if isinstance(tp.p, RdfTerm) and tp.p.value == _LANGUAGE_PARAM:
                    if not (isinstance(tp.o, RdfTerm) and tp.o.is_literal):
                        raise ParseError("wikibase:language needs a literal")
                    for part in tp.o.value.split(","):
                        part = part.strip().lower()
                        if part and not part.startswith("["):
                            languages.append(part)
                elif isinstance(tp.s, Var) and isinstance(tp.o, Var) and isinstance(tp.p, RdfTerm) \
                        and tp.p.value == PREFIXES["rdfs"] + "label":
                    explicit.append((tp.s.name, tp.o.name))
                elif isinstance(tp.s, RdfTerm) and tp.s.value == _SERVICE_PARAM:
                    continue
                else:
                    raise UnsupportedFeature("label service pattern")
        self.expect("}")
        return LabelService(languages, explicit)

    def triples_block(self) -> list[TriplePattern]:
        subject = self.node()
        out: list[TriplePattern] = []
        while True:
            verb = self.verb()
            while True:
                obj = self.node()
                out.append(TriplePattern(subject, verb, obj))
                if self.at_text(","):
                    self.next()
                    continue
                break
            if self.at_text(";"):
                while self.at_text(";"):
                    self.next()
                tok = self.peek()
                if tok is None or tok.text in (".", "}") or tok.kind == "brace_close":
                    break
                if tok.kind == "keyword" and tok.text.lower() in ("optional", "filter", "values", "service"):
                    break
                continue
            break
        return out

    def verb(self) -> Node:
        tok = self.peek()
        if tok is not None and tok.text in ("^", "!", "(") and tok.kind != "literal":
            raise UnsupportedFeature("property paths")
        node = self.node()
        if isinstance(node, RdfTerm) and node.is_literal:
            raise ParseError("a literal cannot be a predicate")
        nxt = self.peek()
        if nxt is not None and nxt.kind in ("punctuation", "other") and nxt.text in ("/", "|", "*", "+", "?"):
            raise UnsupportedFeature("property paths")
        return node

    def node(self) -> Node:
        tok = self.next()
        if tok.kind == "variable":
            return self.note_var(tok.text[1:])
        if tok.text == "[" and tok.kind == "punctuation":
            raise UnsupportedFeature("blank nodes")
        if tok.text == "(" and tok.kind == "paren":
            raise UnsupportedFeature("RDF collections")
        if tok.kind == "keyword" and tok.text == "a":
            return RdfTerm.iri(RDF_TYPE)
        if tok.kind in ("iri", "prefixed_name"):
            return RdfTerm.iri(self.resolve_iri(tok))
        if tok.kind == "literal":
            return self.literal_rest(tok)
        if tok.text == "-" and self.peek() is not None and self.peek().kind == "literal":
            num = self.next()
            return numeric_literal("-" + num.text)
        raise ParseError(f"expected an RDF term or variable at offset {tok.offset}, got {tok.text!r}")

    def literal_rest(self, tok: Token) -> RdfTerm:
        if tok.text[0] in "'\"":
            value = literal_body(tok.text)
            nxt = self.peek()
            if nxt is not None and nxt.kind == "language_tag":
                self.next()
                return RdfTerm.literal(value, language=nxt.text[1:])
            if nxt is not None and nxt.text == "^^":
                self.next()
                dt = self.next()
                return RdfTerm.literal(value, datatype=self.resolve_iri(dt))
            return RdfTerm.literal(value)
        if tok.text.lower() in ("true", "false"):
            return RdfTerm.literal(tok.text.lower(), datatype=XSD_BOOLEAN)
        return numeric_literal(tok.text)

    def resolve_iri(self, tok: Token) -> str:
        if tok.kind == "iri":
            return tok.text[1:-1]
        if tok.kind == "prefixed_name":
            try:
                return expand_pname(tok.text, self.prefixes)
            except KeyError as exc:
                raise ParseError(str(exc.args[0])) from None
        raise ParseError(f"expected an IRI at offset {tok.offset}, got {tok.text!r}")

    # -- expressions --------------------------------------------------------

    def expression(self):
        left = self.and_expr()
        while self.at_text("||"):
            self.next()
            left = BinOp("||", left, self.and_expr())
        return left

    def and_expr(self):
        left = self.relational()
        while self.at_text("&&"):
            self.next()
            left = BinOp("&&", left, self.relational())
        return left

    def relational(self):
        left = self.unary()
        tok = self.peek()
        if tok is not None and tok.kind == "punctuation" and tok.text in _COMPARISONS:
            self.next()
            return BinOp(tok.text, left, self.unary())
        if self.at_keyword("in", "not"):
            raise UnsupportedFeature("IN")
        if tok is not None and tok.kind == "punctuation" and tok.text in ("+", "-", "*", "/"):
            raise UnsupportedFeature("arithmetic")
        return left

    def unary(self):
        if self.at_text("!"):
            self.next()
            return Not(self.unary())
        return self.primary()

    def primary(self):
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of expression")
        if tok.text == "(" and tok.kind == "paren":
            self.next()
            expr = self.expression()
            self.expect(")")
            return expr
        if tok.kind == "variable":
            self.next()
            return self.note_var(tok.text[1:])
        if tok.kind == "keyword" and tok.text != "a":
            name = tok.text.upper()
            if name in ("NOT", "EXISTS"):
                raise UnsupportedFeature("EXISTS")
            if name not in SUPPORTED_FUNCTIONS:
                raise UnsupportedFeature(name)
            self.next()
            self.expect("(")
            args = []
            if not self.at_text(")"):
                args.append(self.expression())
                while self.at_text(","):
                    self.next()
                    args.append(self.expression())
            self.expect(")")
            arity = SUPPORTED_FUNCTIONS[name]
            allowed = arity if isinstance(arity, tuple) else (arity,)
            if len(args) not in allowed:
                raise ParseError(f"{name} takes {arity} arguments, got {len(args)}")
            if name == "BOUND" and not isinstance(args[0], Var):
                raise ParseError("BOUND needs a variable")
            return Call(name, args)
        if tok.kind in ("iri", "prefixed_name") and self.at_text("(", ahead=1):
            raise UnsupportedFeature("extension functions")
        return self.node()


def parse_query(text: str) -> Query:
    return _Parser(text).parse()
