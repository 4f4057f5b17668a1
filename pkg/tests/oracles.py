"""Slow, obviously-correct reimplementations used to cross-check the library.

Nothing here shares code with the implementations under test beyond the
data types.
"""

from __future__ import annotations

import itertools
from typing import Iterable

import rdflib

from hyperkb.dl.semantics import Interpretation, satisfies_kb
from hyperkb.dl.syntax import (
    And, AtLeast, AtMost, BottomConcept, ConceptName, Exists, Forall, InverseRole, KnowledgeBase,
    Nominal, Not, Or, SelfRestriction, TopConcept, UniversalRole, signature,
)
from hyperkb.rdf.graph import Graph
from hyperkb.rdf.terms import BNode, Iri, Literal, Triple
from hyperkb.sparql.query import Var

# -- description logic -----------------------------------------------------------------


def role_holds(interp: Interpretation, role, d: str, e: str) -> bool:
    if isinstance(role, UniversalRole):
        return True
    if isinstance(role, InverseRole):
        return (e, d) in interp.role_map.get(role.name, ())
    return (d, e) in interp.role_map.get(role.name, ())


def concept_holds(interp: Interpretation, c, d: str) -> bool:
    """Element-wise first-order reading of a concept at element ``d``."""
    if isinstance(c, TopConcept):
        return True
    if isinstance(c, BottomConcept):
        return False
    if isinstance(c, ConceptName):
        return d in interp.concept_map.get(c.name, ())
    if isinstance(c, Nominal):
        return any(interp.individual_map[a] == d for a in c.individuals)
    if isinstance(c, Not):
        return not concept_holds(interp, c.operand, d)
    if isinstance(c, And):
        return concept_holds(interp, c.left, d) and concept_holds(interp, c.right, d)
    if isinstance(c, Or):
        return concept_holds(interp, c.left, d) or concept_holds(interp, c.right, d)
    if isinstance(c, SelfRestriction):
        return role_holds(interp, c.role, d, d)
    successors = [
        e for e in interp.domain
        if role_holds(interp, c.role, d, e) and concept_holds(interp, c.filler, e)
    ]
    if isinstance(c, Exists):
        return bool(successors)
    if isinstance(c, Forall):
        return all(
            concept_holds(interp, c.filler, e) for e in interp.domain if role_holds(interp, c.role, d, e)
        )
    if isinstance(c, AtLeast):
        return len(successors) >= c.n
    if isinstance(c, AtMost):
        return len(successors) <= c.n
    raise TypeError(c)


def concept_extension(interp: Interpretation, c) -> frozenset[str]:
    return frozenset(d for d in interp.domain if concept_holds(interp, c, d))


def _subsets(items: list) -> Iterable[frozenset]:
    for r in range(len(items) + 1):
        for combo in itertools.combinations(items, r):
            yield frozenset(combo)


def all_interpretations(kb: KnowledgeBase, n: int) -> Iterable[Interpretation]:
    """Every interpretation over ``d0..d{n-1}`` of the names ``kb`` mentions."""
    sig = signature(kb)
    v = kb.vocabulary
    individuals = sorted(sig.individuals | v.individuals)
    concepts = sorted(sig.concepts | v.concepts)
    roles = sorted(sig.roles | v.roles)
    domain = [f"d{i}" for i in range(n)]
    pairs = list(itertools.product(domain, repeat=2))
    for ind in itertools.product(domain, repeat=len(individuals)):
        for cs in itertools.product(list(_subsets(domain)), repeat=len(concepts)):
            for rs in itertools.product(list(_subsets(pairs)), repeat=len(roles)):
                yield Interpretation(
                    tuple(domain),
                    dict(zip(individuals, ind)),
                    dict(zip(concepts, cs)),
                    dict(zip(roles, rs)),
                )


def naive_has_model(kb: KnowledgeBase, max_domain: int) -> bool:
    return any(
        satisfies_kb(i, kb).satisfied
        for n in range(1, max_domain + 1)
        for i in all_interpretations(kb, n)
    )


# -- graphs --------------------------------------------------------------------------


def _num(t):
    if isinstance(t, Literal) and t.datatype and t.datatype.endswith(("#integer", "#decimal", "#double")):
        return float(t.lexical)
    return None


def _lexical(t) -> str:
    for attr in ("value", "lexical", "label"):
        if hasattr(t, attr):
            return getattr(t, attr)
    raise TypeError(t)


def oracle_compare(op: str, a, b) -> bool:
    na, nb = _num(a), _num(b)
    if na is not None and nb is not None:
        x, y = na, nb
    elif op in ("==", "!="):
        return (a == b) if op == "==" else (a != b)
    else:
        x, y = _lexical(a), _lexical(b)
    return {"==": x == y, "!=": x != y, "<": x < y, "<=": x <= y, ">": x > y, ">=": x >= y}[op]


def nested_loop_bgp(triples: list, patterns: list, filters: list = ()) -> set[tuple]:
    """Left-to-right nested loops over the raw triple list, no indexes."""
    header: list[Var] = []
    for p in patterns:
        for t in (p.subject, p.predicate, p.object):
            if isinstance(t, Var) and t not in header:
                header.append(t)
    envs = [{}]
    for p in patterns:
        nxt = []
        for env in envs:
            for tr in triples:
                e = dict(env)
                ok = True
                for node, term in zip((p.subject, p.predicate, p.object), tr):
                    if isinstance(node, Var):
                        if node in e and e[node] != term:
                            ok = False
                            break
                        e[node] = term
                    elif node != term:
                        ok = False
                        break
                if ok:
                    nxt.append(e)
        envs = nxt
    out = set()
    for env in envs:
        good = True
        for f in filters:
            a = env.get(f.left) if isinstance(f.left, Var) else f.left
            b = env.get(f.right) if isinstance(f.right, Var) else f.right
            if a is None or b is None or not oracle_compare(f.op, a, b):
                good = False
                break
        if good:
            out.add(tuple(env[v] for v in header))
    return out


def matrix_plus(pairs: set[tuple]) -> set[tuple]:
    """Transitive closure by Warshall's algorithm."""
    nodes = sorted({x for p in pairs for x in p}, key=str)
    reach = {(a, b): (a, b) in pairs for a in nodes for b in nodes}
    for k in nodes:
        for i in nodes:
            if reach[(i, k)]:
                for j in nodes:
                    if reach[(k, j)]:
                        reach[(i, j)] = True
    return {p for p, v in reach.items() if v}


# -- rectangles ------------------------------------------------------------------------


def cells(x: int, y: int, w: int, h: int) -> set[tuple[int, int]]:
    return {(i, j) for i in range(x, x + w) for j in range(y, y + h)}


def from_rdflib(g: rdflib.Graph) -> Graph:
    """rdflib, an independent parser, converted to our term types."""

    def conv(t):
        if isinstance(t, rdflib.URIRef):
            return Iri(str(t))
        if isinstance(t, rdflib.BNode):
            return BNode(str(t))
        if t.language:
            return Literal(str(t), language=t.language)
        return Literal(str(t), datatype=str(t.datatype) if t.datatype else None)

    return Graph(Triple(conv(s), conv(p), conv(o)) for s, p, o in g)
