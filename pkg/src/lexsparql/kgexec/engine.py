"""In-memory evaluator for parsed queries.

Basic graph patterns are joined one triple pattern at a time, most
selective first. OPTIONAL is a left join evaluated with the left solution
as seed, so filters inside the optional group see both sides.
"""

from __future__ import annotations

import functools
import re
from typing import Iterable, Optional

from .errors import QueryError
from .query import (
    BinOp, Call, Filter, Group, LabelService, Not, OptionalBlock, Query, TriplePattern,
    ValuesBlock, Var, parse_query,
)
from .results import ResultSet
from .snapshot import Snapshot
from .terms import XSD_BOOLEAN, XSD_INTEGER, RdfTerm

Solution = dict[str, RdfTerm]

_TRUE = RdfTerm.literal("true", datatype=XSD_BOOLEAN)
_FALSE = RdfTerm.literal("false", datatype=XSD_BOOLEAN)


class _ExprError(Exception):
    """SPARQL expression type error; a filter that raises it rejects the row."""


def execute_local(query: str, snapshot: Snapshot) -> ResultSet:
    return evaluate(parse_query(query), snapshot)


def evaluate(query: Query, snapshot: Snapshot) -> ResultSet:
    ev = _Evaluator(query, snapshot)
    solutions = ev.group(query.where, [{}])
    if query.form == "ask":
        return ResultSet.boolean(bool(solutions))

    if query.order_by:
        solutions = sorted(solutions, key=functools.cmp_to_key(ev.compare_solutions))
    if query.projection is None:
        variables = [v for v in query.variables_in_order if any(v in s for s in solutions)]
    else:
        variables = list(query.projection)
    rows = [{v: s[v] for v in variables if v in s} for s in solutions]
    if query.distinct:
        seen = set()
        unique = []
        for row in rows:
            key = frozenset(row.items())
            if key not in seen:
                seen.add(key)
                unique.append(row)
        rows = unique
    end = None if query.limit is None else query.offset + query.limit
    return ResultSet.bindings(variables, rows[query.offset:end])


def row_serialization(row: Solution) -> str:
    return "\x1f".join(f"{k}={row[k].n3()}" for k in sorted(row))


class _Evaluator:
    def __init__(self, query: Query, snapshot: Snapshot):
        self.query = query
        self.snapshot = snapshot
        self.label_vars = query.label_variables

    # -- graph patterns -----------------------------------------------------

    def group(self, group: Group, seeds: list[Solution]) -> list[Solution]:
        sols = seeds
        pending: list = []
        filters: list = []
        services: list[LabelService] = []
        for el in group.elements:
            if isinstance(el, (TriplePattern, ValuesBlock)):
                pending.append(el)
                continue
            if isinstance(el, Filter):
                filters.append(el.expr)
                continue
            if isinstance(el, LabelService):
                services.append(el)
                continue
            sols = self.join_all(sols, pending)
            pending = []
            if isinstance(el, OptionalBlock):
                out = []
                for mu in sols:
                    ext = self.group(el.group, [mu])
                    out.extend(ext if ext else [mu])
                sols = out
            elif isinstance(el, Group):
                inner = self.group(el, [{}])
                sols = [m for mu in sols for nu in inner if (m := _merge(mu, nu)) is not None]
            else:
                raise QueryError(f"unknown pattern element {el!r}")
        sols = self.join_all(sols, pending)
        for svc in services:
            sols = [self.apply_labels(mu, svc) for mu in sols]
        if filters:
            sols = [mu for mu in sols if all(self.passes(f, mu) for f in filters)]
        return sols

    def join_all(self, sols: list[Solution], patterns: list) -> list[Solution]:
        remaining = list(patterns)
        while remaining and sols:
            bound = set(sols[0])
            best = min(range(len(remaining)), key=lambda i: self.cost(remaining[i], bound))
            pattern = remaining.pop(best)
            if isinstance(pattern, ValuesBlock):
                sols = self.join_values(sols, pattern)
            else:
                sols = self.join_triple(sols, pattern)
        return sols if not remaining else []

    def cost(self, pattern, bound: set[str]) -> tuple:
        if isinstance(pattern, ValuesBlock):
            return (0, len(pattern.rows))
        free = 0
        for node in (pattern.s, pattern.p, pattern.o):
            if isinstance(node, Var) and node.name not in bound:
                free += 1
        size = self.snapshot.count(p=pattern.p) if isinstance(pattern.p, RdfTerm) else len(self.snapshot)
        return (1 + free, size)

    def join_values(self, sols: list[Solution], block: ValuesBlock) -> list[Solution]:
        out = []
        for mu in sols:
            for row in block.rows:
                nu = {v: t for v, t in zip(block.variables, row) if t is not None}
                merged = _merge(mu, nu)
                if merged is not None:
                    out.append(merged)
        return out

    def join_triple(self, sols: list[Solution], tp: TriplePattern) -> list[Solution]:
        out = []
        for mu in sols:
            s, p, o = (_resolve(x, mu) for x in (tp.s, tp.p, tp.o))
            for triple in self.snapshot.match(s, p, o):
                nu = dict(mu)
                ok = True
                for node, value in zip((tp.s, tp.p, tp.o), triple):
                    if isinstance(node, Var):
                        cur = nu.get(node.name)
                        if cur is None:
                            nu[node.name] = value
                        elif cur != value:
                            ok = False
                            break
                if ok:
                    out.append(nu)
        return out

    def apply_labels(self, mu: Solution, svc: LabelService) -> Solution:
        pairs = [(v[:-5], v) for v in self.label_vars] + list(svc.explicit)
        out = dict(mu)
        for base, target in pairs:
            if target in out or base not in out:
                continue
            term = out[base]
            if not term.is_iri:
                continue
            for lang in svc.languages:
                text = self.snapshot.label(term.value, lang)
                if text is not None:
                    out[target] = RdfTerm.literal(text, language=lang)
                    break
            else:
                out[target] = RdfTerm.literal(term.local_name)
        return out

    # -- expressions --------------------------------------------------------

    def passes(self, expr, mu: Solution) -> bool:
        try:
            return _ebv(self.eval(expr, mu))
        except _ExprError:
            return False

    def eval(self, expr, mu: Solution) -> RdfTerm:
        if isinstance(expr, RdfTerm):
            return expr
        if isinstance(expr, Var):
            if expr.name not in mu:
                raise _ExprError(f"unbound ?{expr.name}")
            return mu[expr.name]
        if isinstance(expr, Not):
            return _bool(not _ebv(self.eval(expr.operand, mu)))
        if isinstance(expr, BinOp):
            if expr.op in ("||", "&&"):
                return self.logical(expr, mu)
            return _bool(_compare(expr.op, self.eval(expr.left, mu), self.eval(expr.right, mu)))
        if isinstance(expr, Call):
            return self.call(expr, mu)
        raise QueryError(f"unknown expression node {expr!r}")

    def logical(self, expr: BinOp, mu: Solution) -> RdfTerm:
        # three-valued logic: an error on one side can be rescued by the other
        results = []
        for side in (expr.left, expr.right):
            try:
                results.append(_ebv(self.eval(side, mu)))
            except _ExprError:
                results.append(None)
        a, b = results
        if expr.op == "||":
            if a is True or b is True:
                return _TRUE
            if a is None or b is None:
                raise _ExprError("error in ||")
            return _FALSE
        if a is False or b is False:
            return _FALSE
        if a is None or b is None:
            raise _ExprError("error in &&")
        return _TRUE

    def call(self, expr: Call, mu: Solution) -> RdfTerm:
        name = expr.name
        if name == "BOUND":
            return _bool(expr.args[0].name in mu)
        args = [self.eval(a, mu) for a in expr.args]
        if name == "STR":
            return RdfTerm.literal(args[0].value)
        if name == "LANG":
            if not args[0].is_literal:
                raise _ExprError("LANG of an IRI")
            return RdfTerm.literal(args[0].language or "")
        if name == "LANGMATCHES":
            tag, rng = _string(args[0]).lower(), _string(args[1]).lower()
            if rng == "*":
                return _bool(tag != "")
            return _bool(tag == rng or tag.startswith(rng + "-"))
        if name == "STRLEN":
            return RdfTerm.literal(str(len(_string(args[0]))), datatype=XSD_INTEGER)
        if name == "REGEX":
            flags = 0
            for ch in _string(args[2]) if len(args) == 3 else "":
                flags |= {"i": re.I, "s": re.S, "m": re.M, "x": re.X}.get(ch, 0)
            try:
                return _bool(re.search(_string(args[1]), _string(args[0]), flags) is not None)
            except re.error as exc:
                raise _ExprError(f"bad regex: {exc}") from None
        if name == "CONTAINS":
            return _bool(_string(args[1]) in _string(args[0]))
        if name == "STRSTARTS":
            return _bool(_string(args[0]).startswith(_string(args[1])))
        if name == "STRENDS":
            return _bool(_string(args[0]).endswith(_string(args[1])))
        if name in ("LCASE", "UCASE"):
            text = _string(args[0])
            text = text.lower() if name == "LCASE" else text.upper()
            return RdfTerm.literal(text, language=args[0].language)
        if name in ("ISIRI", "ISURI"):
            return _bool(args[0].is_iri)
        if name == "ISLITERAL":
            return _bool(args[0].is_literal)
        if name == "SAMETERM":
            return _bool(args[0] == args[1])
        raise QueryError(f"function {name} has no implementation")

    # -- ordering -----------------------------------------------------------

    def compare_solutions(self, a: Solution, b: Solution) -> int:
        for key in self.query.order_by:
            ta = self._key_value(key.expr, a)
            tb = self._key_value(key.expr, b)
            c = compare_terms(ta, tb)
            if c:
                return -c if key.descending else c
        sa, sb = row_serialization(a), row_serialization(b)
        return (sa > sb) - (sa < sb)

    def _key_value(self, expr, mu: Solution) -> Optional[RdfTerm]:
        try:
            return self.eval(expr, mu)
        except _ExprError:
            return None


def compare_terms(a: Optional[RdfTerm], b: Optional[RdfTerm]) -> int:
    """ORDER BY ordering: unbound < IRIs < literals; numbers compare by value."""
    ra = 0 if a is None else (1 if a.is_iri else 2)
    rb = 0 if b is None else (1 if b.is_iri else 2)
    if ra != rb or ra == 0:
        return (ra > rb) - (ra < rb)
    if a.is_numeric and b.is_numeric:
        x, y = a.numeric_value(), b.numeric_value()
        if x != y:
            return (x > y) - (x < y)
    ka, kb = a.sort_key(), b.sort_key()
    return (ka > kb) - (ka < kb)


def _resolve(node, mu: Solution) -> Optional[RdfTerm]:
    if isinstance(node, Var):
        return mu.get(node.name)
    return node


def _merge(mu: Solution, nu: Solution) -> Optional[Solution]:
    out = dict(mu)
    for k, v in nu.items():
        cur = out.get(k)
        if cur is None:
            out[k] = v
        elif cur != v:
            return None
    return out


def _bool(flag: bool) -> RdfTerm:
    return _TRUE if flag else _FALSE


def _ebv(term: RdfTerm) -> bool:
    if term.is_iri:
        raise _ExprError("no boolean value for an IRI")
    if term.datatype == XSD_BOOLEAN:
        return term.value in ("true", "1")
    if term.is_numeric:
        try:
            return term.numeric_value() != 0
        except ValueError:
            return False
    if term.datatype is None:
        return term.value != ""
    raise _ExprError(f"no boolean value for datatype {term.datatype}")


def _string(term: RdfTerm) -> str:
    if not term.is_literal or (term.datatype is not None):
        raise _ExprError("string function applied to a non-string")
    return term.value


def _compare(op: str, a: RdfTerm, b: RdfTerm) -> bool:
    if a.is_numeric and b.is_numeric:
        x, y = a.numeric_value(), b.numeric_value()
    elif op in ("=", "!="):
        same = a == b
        return same if op == "=" else not same
    elif a.is_literal and b.is_literal and a.datatype is None and b.datatype is None \
            and a.language == b.language:
        x, y = a.value, b.value
    else:
        raise _ExprError(f"cannot order {a} and {b}")
    return {
        "=": x == y, "!=": x != y, "<": x < y, ">": x > y, "<=": x <= y, ">=": x >= y,
    }[op]


def evaluate_all(queries: Iterable[str], snapshot: Snapshot) -> list[ResultSet]:
    return [execute_local(q, snapshot) for q in queries]
