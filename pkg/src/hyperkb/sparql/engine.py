"""Evaluation of SELECT queries over an RDF graph, with set semantics."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable

from hyperkb.rdf.graph import Graph
from hyperkb.rdf.terms import BNode, Iri, Literal, Term, term_key
from hyperkb.rdf.turtle import PrefixEnv
from hyperkb.sparql.query import (
    Comparison, Edge, Group, Inverse, Node, PathClause, PathExpr, Plus, SelectQuery, Seq,
    TriplePattern, Var,
)

Binding = dict[Var, Term]
Pair = tuple[Term, Term]


@dataclass
class BindingTable:
    header: tuple[Var, ...]
    rows: list[tuple[Term, ...]] = field(default_factory=list)

    def __post_init__(self) -> None:
        for row in self.rows:
            if len(row) != len(self.header):
                raise ValueError("row arity differs from header arity")

    def sorted_rows(self) -> list[tuple[Term, ...]]:
        return sorted(set(self.rows), key=lambda r: tuple(term_key(t) for t in r))

    def as_set(self) -> set[tuple[Term, ...]]:
        return set(self.rows)

    def __len__(self) -> int:
        return len(self.rows)


# -- paths ---------------------------------------------------------------------


def _compose(left: set[Pair], right: set[Pair]) -> set[Pair]:
    by_start: dict[Term, list[Term]] = {}
    for a, b in right:
        by_start.setdefault(a, []).append(b)
    return {(a, c) for a, b in left for c in by_start.get(b, ())}


def eval_path(graph: Graph, path: PathExpr) -> set[Pair]:
    if isinstance(path, Edge):
        return {(t.subject, t.object) for t in graph.match(None, path.predicate, None)}
    if isinstance(path, Inverse):
        return {(b, a) for a, b in eval_path(graph, path.path)}
    if isinstance(path, Seq):
        return _compose(eval_path(graph, path.left), eval_path(graph, path.right))
    if isinstance(path, Group):
        return eval_path(graph, path.path)
    if isinstance(path, Plus):
        step = eval_path(graph, path.path)
        closure = set(step)
        frontier = set(step)
        while frontier:
            frontier = _compose(frontier, step) - closure
            closure |= frontier
        return closure
    raise TypeError(f"not a path expression: {path!r}")


# -- filters -------------------------------------------------------------------


def _numeric(t: Term):
    if isinstance(t, Literal) and t.is_numeric:
        try:
            return t.numeric_value()
        except ValueError:
            return None
    return None


def _text(t: Term) -> str:
    if isinstance(t, Iri):
        return t.value
    if isinstance(t, BNode):
        return t.label
    return t.lexical


def compare(op: str, left: Term, right: Term) -> bool:
    """Numeric when both sides are numeric literals, else by codepoint."""
    ln, rn = _numeric(left), _numeric(right)
    if ln is not None and rn is not None:
        a, b = ln, rn
    elif op in ("==", "!="):
        return (left == right) == (op == "==")
    else:
        a, b = _text(left), _text(right)
    return {
        "==": a == b, "!=": a != b, "<": a < b, "<=": a <= b, ">": a > b, ">=": a >= b,
    }[op]


def _value(node: Node, env: Binding) -> Term | None:
    return env.get(node) if isinstance(node, Var) else node


def _passes(filters: Iterable[Comparison], env: Binding) -> bool:
    for f in filters:
        left, right = _value(f.left, env), _value(f.right, env)
        # an unbound variable makes the filter an error, which rejects the row
        if left is None or right is None or not compare(f.op, left, right):
            return False
    return True


# -- basic graph patterns ------------------------------------------------------------


def _bound_count(pat: TriplePattern, env: Binding) -> int:
    return sum(1 for t in (pat.subject, pat.predicate, pat.object) if not isinstance(t, Var) or t in env)


def _extend(env: Binding, node: Node, term: Term) -> Binding | None:
    if isinstance(node, Var):
        current = env.get(node)
        if current is None:
            return {**env, node: term}
        return env if current == term else None
    return env if node == term else None


def _solve(graph: Graph, patterns: list[TriplePattern], env: Binding) -> Iterable[Binding]:
    if not patterns:
        yield env
        return
    # most-constrained pattern first
    best = max(range(len(patterns)), key=lambda i: _bound_count(patterns[i], env))
    pat = patterns[best]
    rest = patterns[:best] + patterns[best + 1:]
    s, p, o = (_value(pat.subject, env), _value(pat.predicate, env), _value(pat.object, env))
    for t in graph.match(s, p, o):
        e = _extend(env, pat.subject, t.subject)
        if e is not None:
            e = _extend(e, pat.predicate, t.predicate)
        if e is not None:
            e = _extend(e, pat.object, t.object)
        if e is not None:
            yield from _solve(graph, rest, e)


def _ordered_vars(patterns: Iterable[TriplePattern]) -> tuple[Var, ...]:
    seen: dict[Var, None] = {}
    for pat in patterns:
        for t in (pat.subject, pat.predicate, pat.object):
            if isinstance(t, Var):
                seen.setdefault(t)
    return tuple(seen)


def eval_bgp(graph: Graph, patterns: Iterable[TriplePattern], filters: Iterable[Comparison] = ()) -> BindingTable:
    patterns = list(patterns)
    filters = list(filters)
    header = _ordered_vars(patterns)
    rows = {
        tuple(env[v] for v in header)
        for env in _solve(graph, patterns, {})
        if _passes(filters, env)
    }
    table = BindingTable(header, list(rows))
    table.rows = table.sorted_rows()
    return table


def _join_path(graph: Graph, clause: PathClause, envs: list[Binding]) -> list[Binding]:
    pairs = eval_path(graph, clause.path)
    out = []
    for env in envs:
        start, end = _value(clause.start, env), _value(clause.end, env)
        for a, b in pairs:
            if start is not None and a != start:
                continue
            if end is not None and b != end:
                continue
            e = _extend(env, clause.start, a)
            if e is not None:
                e = _extend(e, clause.end, b)
            if e is not None:
                out.append(e)
    return out


def eval_select(graph: Graph, query: SelectQuery) -> BindingTable:
    envs = list(_solve(graph, list(query.patterns), {}))
    for clause in query.paths:
        envs = _join_path(graph, clause, envs)
    rows = {
        tuple(env[v] for v in query.projection)
        for env in envs
        if _passes(query.filters, env)
    }
    table = BindingTable(query.projection, list(rows))
    table.rows = table.sorted_rows()
    return table


# -- output --------------------------------------------------------------------


def format_term(t: Term, env: PrefixEnv | None = None) -> str:
    if isinstance(t, Iri) and env is not None:
        short = env.abbreviate(t.value)
        if short is not None:
            return short
    return str(t)


def format_tsv(table: BindingTable, env: PrefixEnv | None = None) -> str:
    lines = ["\t".join(str(v) for v in table.header)]
    lines += ["\t".join(format_term(t, env) for t in row) for row in table.sorted_rows()]
    return "\n".join(lines) + "\n"


def table_to_json(table: BindingTable, env: PrefixEnv | None = None) -> dict:
    return {
        "columns": [v.name for v in table.header],
        "rows": [
            {v.name: format_term(t, env) for v, t in zip(table.header, row)}
            for row in table.sorted_rows()
        ],
    }


def format_json(table: BindingTable, env: PrefixEnv | None = None) -> str:
    return json.dumps(table_to_json(table, env), indent=2, sort_keys=True) + "\n"
