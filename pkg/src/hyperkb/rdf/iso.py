"""Graph isomorphism up to blank-node renaming.

Colour refinement over blank nodes followed by backtracking on the first
ambiguous colour class.  Exponential in the worst case; fine for graphs of a
few thousand triples with mostly distinguishable blank nodes.
"""

from __future__ import annotations

from hyperkb.rdf.graph import Graph
from hyperkb.rdf.terms import BNode, Term, Triple

Colouring = dict[BNode, int]


def _signature(graph: Graph, b: BNode, colours: Colouring) -> tuple:
    def code(t: Term):
        return ("b", colours[t]) if isinstance(t, BNode) else ("g", t)

    out = sorted((("o", t.predicate, code(t.object)) for t in graph.match(b)), key=repr)
    inc = sorted((("i", t.predicate, code(t.subject)) for t in graph.match(None, None, b)), key=repr)
    return (colours[b], tuple(out), tuple(inc))


def _refine(g1: Graph, c1: Colouring, g2: Graph, c2: Colouring) -> tuple[Colouring, Colouring]:
    while True:
        s1 = {b: _signature(g1, b, c1) for b in c1}
        s2 = {b: _signature(g2, b, c2) for b in c2}
        table: dict[tuple, int] = {}
        for sig in sorted(set(s1.values()) | set(s2.values()), key=repr):
            table[sig] = len(table)
        n1 = {b: table[s] for b, s in s1.items()}
        n2 = {b: table[s] for b, s in s2.items()}
        if len(set(n1.values())) == len(set(c1.values())) and len(set(n2.values())) == len(set(c2.values())):
            return n1, n2
        c1, c2 = n1, n2


def _classes(c: Colouring) -> dict[int, list[BNode]]:
    out: dict[int, list[BNode]] = {}
    for b, col in c.items():
        out.setdefault(col, []).append(b)
    return out


def _apply(graph: Graph, mapping: dict[BNode, BNode]) -> set[Triple]:
    return {
        Triple(mapping.get(t.subject, t.subject), t.predicate, mapping.get(t.object, t.object))
        for t in graph
    }


def bnode_mapping(g1: Graph, g2: Graph) -> dict[BNode, BNode] | None:
    """A blank-node bijection turning ``g1`` into ``g2``, or None."""
    if len(g1) != len(g2):
        return None
    b1, b2 = g1.blank_nodes(), g2.blank_nodes()
    if len(b1) != len(b2):
        return None
    ground1 = {t for t in g1 if not isinstance(t.subject, BNode) and not isinstance(t.object, BNode)}
    ground2 = {t for t in g2 if not isinstance(t.subject, BNode) and not isinstance(t.object, BNode)}
    if ground1 != ground2:
        return None
    target = set(g2)
    return _search(g1, {b: 0 for b in b1}, g2, {b: 0 for b in b2}, target)


def _search(g1, c1, g2, c2, target) -> dict[BNode, BNode] | None:
    c1, c2 = _refine(g1, c1, g2, c2)
    k1, k2 = _classes(c1), _classes(c2)
    if {k: len(v) for k, v in k1.items()} != {k: len(v) for k, v in k2.items()}:
        return None
    ambiguous = sorted((k for k, v in k1.items() if len(v) > 1), key=lambda k: len(k1[k]))
    if not ambiguous:
        mapping = {k1[k][0]: k2[k][0] for k in k1}
        return mapping if _apply(g1, mapping) == target else None
    col = ambiguous[0]
    fresh = max(max(c1.values()), max(c2.values())) + 1
    pick = sorted(k1[col], key=lambda b: b.label)[0]
    for candidate in sorted(k2[col], key=lambda b: b.label):
        found = _search(g1, {**c1, pick: fresh}, g2, {**c2, candidate: fresh}, target)
        if found is not None:
            return found
    return None


def isomorphic(g1: Graph, g2: Graph) -> bool:
    return bnode_mapping(g1, g2) is not None
