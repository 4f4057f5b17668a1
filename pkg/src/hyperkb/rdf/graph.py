"""Indexed in-memory triple store.

Not internally synchronised: callers sharing a graph between threads must
hold a reader/writer lock (see :mod:`hyperkb.service.store`).
"""

from __future__ import annotations

from collections import defaultdict
from typing import Iterable, Iterator

from hyperkb.rdf.terms import RDF, BNode, Iri, Subject, Term, Triple, triple_key


class Graph:
    def __init__(self, triples: Iterable[Triple] = ()):
        self._triples: set[Triple] = set()
        self._by_s: defaultdict[Term, set[Triple]] = defaultdict(set)
        self._by_p: defaultdict[Term, set[Triple]] = defaultdict(set)
        self._by_o: defaultdict[Term, set[Triple]] = defaultdict(set)
        for t in triples:
            self.add(t)

    def add(self, triple: Triple) -> bool:
        """Insert ``triple``; False when it was already present."""
        if not isinstance(triple, Triple):
            triple = Triple(*triple)
        if triple in self._triples:
            return False
        self._triples.add(triple)
        self._by_s[triple.subject].add(triple)
        self._by_p[triple.predicate].add(triple)
        self._by_o[triple.object].add(triple)
        return True

    def remove(self, triple: Triple) -> bool:
        """Delete ``triple``; False when it was absent."""
        if triple not in self._triples:
            return False
        self._triples.discard(triple)
        for index, key in ((self._by_s, triple.subject), (self._by_p, triple.predicate),
                           (self._by_o, triple.object)):
            bucket = index[key]
            bucket.discard(triple)
            if not bucket:
                del index[key]
        return True

    def match(self, s: Term | None = None, p: Term | None = None, o: Term | None = None) -> Iterator[Triple]:
        """Triples agreeing with every bound (non-None) position."""
        candidates = None
        for index, key in ((self._by_s, s), (self._by_p, p), (self._by_o, o)):
            if key is None:
                continue
            bucket = index.get(key)
            if not bucket:
                return iter(())
            if candidates is None or len(bucket) < len(candidates):
                candidates = bucket
        if candidates is None:
            candidates = self._triples
        return (
            t for t in list(candidates)
            if (s is None or t.subject == s) and (p is None or t.predicate == p)
            and (o is None or t.object == o)
        )

    def objects(self, s: Subject, p: Iri) -> list[Term]:
        return [t.object for t in self.match(s, p, None)]

    def value(self, s: Subject, p: Iri) -> Term | None:
        objs = self.objects(s, p)
        return objs[0] if len(objs) == 1 else None

    def subjects(self) -> set[Subject]:
        return set(self._by_s)

    def blank_nodes(self) -> set[BNode]:
        out = {t for t in self._by_s if isinstance(t, BNode)}
        out.update(t for t in self._by_o if isinstance(t, BNode))
        return out

    def sorted_triples(self) -> list[Triple]:
        return sorted(self._triples, key=triple_key)

    def copy(self) -> Graph:
        return Graph(self._triples)

    def __len__(self) -> int:
        return len(self._triples)

    def __iter__(self) -> Iterator[Triple]:
        return iter(list(self._triples))

    def __contains__(self, triple: object) -> bool:
        return triple in self._triples

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._triples == other._triples

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"Graph({len(self)} triples)"


def collection_items(graph: Graph, head: Term) -> list[Term] | None:
    """Members of a well-formed RDF list starting at ``head``, else None."""
    first, rest, nil = Iri(RDF + "first"), Iri(RDF + "rest"), Iri(RDF + "nil")
    items: list[Term] = []
    seen = set()
    node = head
    while node != nil:
        if not isinstance(node, BNode) or node in seen:
            return None
        seen.add(node)
        firsts, rests = graph.objects(node, first), graph.objects(node, rest)
        if len(firsts) != 1 or len(rests) != 1:
            return None
        items.append(firsts[0])
        node = rests[0]
    return items
