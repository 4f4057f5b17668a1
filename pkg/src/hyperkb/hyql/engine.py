"""HyQL evaluation over an :class:`HkBase`, closed-world.

Variables are bound by nested loops in declaration order; each clause is
checked as soon as every variable it mentions is bound.  Solutions are
projected onto the targets and duplicates dropped, so ``distinct`` never
changes the rows and ``count`` counts distinct rows.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Iterator

from hyperkb.errors import BudgetExceeded, HslError, QueryError, UnknownIdError
from hyperkb.hk.base import HkBase
from hyperkb.hk.model import Anchor, Connector, Context, Link, Node, SpatialAnchor, TargetRef
from hyperkb.hyql.query import (
    AnchorRef, AttrClause, AttrRef, Clause, Const, ContextClause, Decl, FunCall, FunClause,
    HyqlQuery, LinkClause, RelClause, SpoClause, VarRef, clause_vars, parse_hyql, target_label,
)
from hyperkb.hyql.relations import SPATIAL, TEMPORAL


@dataclass
class ResultSet:
    columns: list[str]
    rows: list[tuple] = field(default_factory=list)
    aggregate: Any = None
    modifier: str | None = None

    @property
    def is_aggregate(self) -> bool:
        return self.modifier in ("count", "max", "min", "sum", "avg")

    def column(self, index: int = 0) -> list:
        return [r[index] for r in self.rows]

    def to_json(self) -> dict:
        if self.is_aggregate:
            return {"aggregate": self.aggregate}
        return {"columns": self.columns, "rows": [dict(zip(self.columns, r)) for r in self.rows]}

    def format_text(self) -> str:
        if self.is_aggregate:
            return _scalar_text(self.aggregate) + "\n"
        return "".join("\t".join(_scalar_text(v) for v in r) + "\n" for r in self.rows)

    def format_json(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"


def _scalar_text(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float) and v.is_integer():
        return str(int(v))
    return str(v)


class _Evaluator:
    def __init__(self, base: HkBase, query: HyqlQuery, budget: int | None = None):
        self.base = base
        self.query = query
        self.budget = budget
        self.steps = 0
        self.constants: dict[str, str] = {}
        self.domains: dict[str, list[str]] = {}
        for d in query.decls:
            self._bind_decl(d)
        self.order = [d.name for d in query.decls if d.name not in self.constants]
        known = {d.name: d for d in query.decls}
        self.schedule: dict[int, list[Clause]] = {}
        for c in query.where:
            self._check_clause(c)
            names = [n for n in clause_vars(c, known) if n not in self.constants]
            level = max((self.order.index(n) for n in names), default=-1)
            self.schedule.setdefault(level, []).append(c)
        self.owners = self._ownership_vars()

    # -- variable domains --------------------------------------------------------

    def _bind_decl(self, d: Decl) -> None:
        base = self.base
        if d.kind == "connector":
            if not isinstance(base.get_entity_or_none(d.binding), Connector):
                raise QueryError(f"unknown connector {d.binding!r}")
            self.domains[d.name] = [link.id for link in base.links(d.binding)]
        elif d.kind == "free":
            self.domains[d.name] = [
                ref for n in base.nodes() for ref in [n.id, *(f"{n.id}#{a}" for a in n.anchors)]
            ]
        elif d.implicit and not self._is_concept(d.binding):
            # a bare name that is not a concept stands for the entity itself
            if d.binding not in base:
                raise QueryError(f"unknown concept {d.binding!r}")
            self.constants[d.name] = d.binding
        else:
            if not self._is_concept(d.binding):
                raise QueryError(f"unknown concept {d.binding!r}")
            self.domains[d.name] = self.base.instances_of(d.binding)

    def _is_concept(self, ident: str) -> bool:
        if ident not in self.base:
            return False
        target = self.base.resolve(ident)
        return isinstance(target, Node) and target.is_concept

    def _check_clause(self, c: Clause) -> None:
        if isinstance(c, SpoClause):
            decl = self.query.decl(c.connector)
            if decl is None or decl.kind != "connector":
                if not isinstance(self.base.get_entity_or_none(c.connector), Connector):
                    raise QueryError(f"unknown connector {c.connector!r}")

    def _ownership_vars(self) -> list[str]:
        """Target variables that must own the anchors of spatial clauses."""
        spatial = [c for c in self.query.where if isinstance(c, RelClause) and not c.temporal]
        if not spatial:
            return []
        in_rel = {n for c in spatial for n in clause_vars(c)}
        return [
            t.name for t in self.query.targets
            if isinstance(t, VarRef) and t.name not in in_rel and t.name not in self.constants
        ]

    # -- values ---------------------------------------------------------------------

    def value(self, name: str, env: dict[str, str]) -> str:
        return self.constants[name] if name in self.constants else env[name]

    def ref(self, text: str) -> TargetRef:
        return TargetRef.parse(text)

    def canon(self, text: str) -> TargetRef:
        return self.base.canonical(self.ref(text))

    def anchor_of(self, text: str) -> Anchor | None:
        ref = self.canon(text)
        if ref.anchor is None:
            return None
        node = self.base.get_entity(ref.node)
        return node.anchors.get(ref.anchor) if isinstance(node, Node) else None

    def operand(self, op: VarRef | AnchorRef, env: dict[str, str]) -> str | None:
        if isinstance(op, VarRef):
            return self.value(op.name, env)
        base_ref = self.ref(self.value(op.var, env))
        if base_ref.anchor is not None:
            return None
        owner = self.base.get_entity(self.base.canonical(base_ref).node)
        if not isinstance(owner, Node) or op.anchor not in owner.anchors:
            return None
        return f"{base_ref.node}#{op.anchor}"

    def attr(self, ref: AttrRef, env: dict[str, str]) -> Any:
        text = self.value(ref.var, env)
        target = self.ref(text)
        if target.anchor is None:
            return self.base.attr(target.node, ref.attr)
        anchor = self.anchor_of(text)
        if anchor is None:
            return None
        if ref.attr == "id":
            return text
        if hasattr(anchor, ref.attr) and ref.attr not in ("attrs", "owner"):
            return getattr(anchor, ref.attr)
        return anchor.attrs.get(ref.attr)

    def exp(self, e: Any, env: dict[str, str]) -> Any:
        if isinstance(e, Const):
            return e.value
        if isinstance(e, VarRef):
            return self.value(e.name, env)
        if isinstance(e, AttrRef):
            return self.attr(e, env)
        if isinstance(e, FunCall):
            return self.call(e, env)
        raise TypeError(f"not an expression: {e!r}")

    def call(self, f: FunCall, env: dict[str, str]) -> Any:
        arg = self.exp(f.args[0], env)
        try:
            target = self.canon(arg) if isinstance(arg, str) else None
        except (HslError, UnknownIdError):
            target = None
        if target is None:
            raise QueryError(f"{f.name}() needs an entity, got {arg!r}")
        if f.name == "id":
            return str(target)
        # count(x): links binding x, after dereferencing
        return sum(
            1 for link in self.base.links()
            if any(self.base.canonical(t) == target for _, t in link.binds)
        )

    # -- clauses ----------------------------------------------------------------------

    def holds(self, c: Clause, env: dict[str, str]) -> bool:
        if isinstance(c, (AttrClause, FunClause)):
            left = self.attr(c.left, env) if isinstance(c, AttrClause) else self.call(c.left, env)
            return compare(c.op, left, self.exp(c.right, env))
        if isinstance(c, SpoClause):
            return self._spo(c, env)
        if isinstance(c, RelClause):
            return self._rel(c, env)
        if isinstance(c, ContextClause):
            return self._within(c, env)
        if isinstance(c, LinkClause):
            return self._link(c, env)
        raise TypeError(f"not a clause: {c!r}")

    def _spo(self, c: SpoClause, env: dict[str, str]) -> bool:
        subject = self.operand(c.subject, env)
        if subject is None:
            return False
        s, o = self.canon(subject), self.canon(self.value(c.object, env))
        decl = self.query.decl(c.connector)
        if decl is not None and decl.kind == "connector":
            links = [self.base.get_entity(env[c.connector])]
        else:
            links = self.base.links(c.connector)
        base = self.base
        return any(
            any(base.canonical(t) == s for t in link.targets("subject"))
            and any(base.canonical(t) == o for t in link.targets("object"))
            for link in links
        )

    def _rel(self, c: RelClause, env: dict[str, str]) -> bool:
        left, right = self.operand(c.left, env), self.operand(c.right, env)
        if left is None or right is None:
            return False
        a, b = self.anchor_of(left), self.anchor_of(right)
        if a is None or b is None:
            return False
        if c.temporal:
            if isinstance(a, SpatialAnchor) or isinstance(b, SpatialAnchor):
                return False
            return TEMPORAL[c.op](a, b)
        if not (isinstance(a, SpatialAnchor) and isinstance(b, SpatialAnchor)) or a.owner != b.owner:
            return False
        return SPATIAL[c.op](a, b)

    def _within(self, c: ContextClause, env: dict[str, str]) -> bool:
        ctx = self.value(c.context, env)
        if not isinstance(self.base.get_entity_or_none(ctx), Context):
            raise QueryError(f"{ctx!r} is not a context")
        return ctx in self.base.context_ancestors(self.ref(self.value(c.var, env)).node)

    def _link(self, c: LinkClause, env: dict[str, str]) -> bool:
        link = self.base.get_entity_or_none(self.value(c.var, env))
        if not isinstance(link, Link):
            return False
        for role, var in c.binds:
            want = self.canon(self.value(var, env))
            if not any(self.base.canonical(t) == want for t in link.targets(role)):
                return False
        return True

    # -- search -----------------------------------------------------------------------

    def _owns(self, env: dict[str, str]) -> bool:
        if not self.owners:
            return True
        owners = set()
        for c in self.query.where:
            if isinstance(c, RelClause) and not c.temporal:
                for op in (c.left, c.right):
                    text = self.operand(op, env)
                    if text is not None:
                        owners.add(self.canon(text).node)
        return all(self.canon(env[n]).node in owners for n in self.owners)

    def solutions(self) -> Iterator[dict[str, str]]:
        env: dict[str, str] = {}
        if not all(self.holds(c, env) for c in self.schedule.get(-1, ())):
            return

        def step(level: int) -> Iterator[dict[str, str]]:
            if level == len(self.order):
                if self._owns(env):
                    yield dict(env)
                return
            name = self.order[level]
            for value in self.domains[name]:
                self.steps += 1
                if self.budget is not None and self.steps > self.budget:
                    raise BudgetExceeded(
                        f"query visited more than {self.budget} variable assignments",
                        self.steps, self.budget,
                    )
                env[name] = value
                if all(self.holds(c, env) for c in self.schedule.get(level, ())):
                    yield from step(level + 1)
            env.pop(name, None)

        yield from step(0)

    def target(self, t: Any, env: dict[str, str]) -> Any:
        if isinstance(t, AnchorRef):
            return self.operand(t, env)
        return self.exp(t, env)


_ORDERING = {
    "<": lambda a, b: a < b, "<=": lambda a, b: a <= b,
    ">": lambda a, b: a > b, ">=": lambda a, b: a >= b,
}


def _is_number(v: Any) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def compare(op: str, left: Any, right: Any) -> bool:
    """Missing attributes never compare; ordering needs like-typed operands."""
    if left is None or right is None:
        return False
    if op in ("==", "!="):
        same = left == right and (_is_number(left) == _is_number(right))
        return same if op == "==" else not same
    if _is_number(left) and _is_number(right) or isinstance(left, str) and isinstance(right, str):
        return _ORDERING[op](left, right)
    raise QueryError(f"cannot order {left!r} and {right!r} with {op!r}")


def _aggregate(modifier: str, rows: list[tuple]) -> Any:
    if modifier == "count":
        return len(rows)
    values = [r[-1] for r in rows if r[-1] is not None]
    if modifier in ("sum", "avg"):
        if not all(_is_number(v) for v in values):
            raise QueryError(f"{modifier} needs numeric values")
        if modifier == "sum":
            return sum(values)
        return sum(values) / len(values) if values else None
    if not values:
        return None
    kinds = {_is_number(v) for v in values}
    if len(kinds) > 1 or not (kinds == {True} or all(isinstance(v, str) for v in values)):
        raise QueryError(f"{modifier} needs all-numeric or all-string values")
    return max(values) if modifier == "max" else min(values)


def eval_hyql(base: HkBase, query: HyqlQuery | str, budget: int | None = None) -> ResultSet:
    """Evaluate; ``budget`` caps the number of variable assignments tried."""
    if isinstance(query, str):
        query = parse_hyql(query)
    try:
        ev = _Evaluator(base, query, budget)
        rows: dict[tuple, None] = {}
        for env in ev.solutions():
            rows.setdefault(tuple(ev.target(t, env) for t in query.targets))
    except UnknownIdError as exc:
        raise QueryError(str(exc)) from None
    out = list(rows)
    columns = [target_label(t) for t in query.targets]
    result = ResultSet(columns, out, modifier=query.modifier)
    if query.is_aggregate:
        result.aggregate = _aggregate(query.modifier, out)
    return result
