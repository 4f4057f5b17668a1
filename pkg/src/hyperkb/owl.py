"""SROIQ to OWL 2 DL, as an RDF graph.

Names become IRIs in one namespace (the empty prefix).  Complex roles and
concepts become blank nodes labelled ``b0, b1, ...`` in the order they are
created, so the same knowledge base always yields the same graph.  Nested
intersections and unions are flattened into one n-ary list.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from hyperkb.dl.syntax import (
    And, Asy, AtLeast, AtMost, Axiom, BottomConcept, Concept, ConceptAssertion, ConceptName,
    Dis, Equality, Exists, Forall, Gci, Inequality, InverseRole, Irr, KnowledgeBase,
    NegativeRoleAssertion, Nominal, Not, Or, Ref, Ria, Role, RoleAssertion,
    SelfRestriction, Sym, TopConcept, Tra, UniversalRole, signature,
)
from hyperkb.rdf.graph import Graph
from hyperkb.rdf.terms import OWL, RDF, RDFS, BNode, Iri, Term, Triple, boolean, integer
from hyperkb.rdf.turtle import PrefixEnv, STANDARD_PREFIXES

DEFAULT_NAMESPACE = "http://example.org/movie-facts#"

RDF_TYPE = Iri(RDF + "type")
RDF_FIRST = Iri(RDF + "first")
RDF_REST = Iri(RDF + "rest")
RDF_NIL = Iri(RDF + "nil")


def _owl(local: str) -> Iri:
    return Iri(OWL + local)


CHARACTERISTIC_CLASSES = {
    Sym: _owl("SymmetricProperty"),
    Asy: _owl("AsymmetricProperty"),
    Tra: _owl("TransitiveProperty"),
    Ref: _owl("ReflexiveProperty"),
    Irr: _owl("IrreflexiveProperty"),
}


@dataclass
class TranslationOutput:
    graph: Graph
    prefix_env: PrefixEnv = field(default_factory=PrefixEnv)


class OwlTranslator:
    """Stateful only in its blank-node counter."""

    def __init__(self, namespace: str = DEFAULT_NAMESPACE, first_bnode: int = 0):
        self.namespace = namespace
        self.counter = first_bnode

    def name(self, local: str) -> Iri:
        return Iri(self.namespace + local)

    def fresh(self) -> BNode:
        node = BNode(f"b{self.counter}")
        self.counter += 1
        return node

    def collection(self, items: list[Term], out: list[Triple]) -> Term:
        if not items:
            return RDF_NIL
        nodes = [self.fresh() for _ in items]
        for i, (node, item) in enumerate(zip(nodes, items)):
            out.append(Triple(node, RDF_FIRST, item))
            out.append(Triple(node, RDF_REST, nodes[i + 1] if i + 1 < len(nodes) else RDF_NIL))
        return nodes[0]

    def role(self, role: Role, out: list[Triple]) -> Term:
        if isinstance(role, UniversalRole):
            return _owl("topObjectProperty")
        if isinstance(role, InverseRole):
            b = self.fresh()
            out.append(Triple(b, _owl("inverseOf"), self.name(role.name)))
            return b
        return self.name(role.name)

    def concept(self, c: Concept, out: list[Triple]) -> Term:
        if isinstance(c, ConceptName):
            return self.name(c.name)
        if isinstance(c, TopConcept):
            return _owl("Thing")
        if isinstance(c, BottomConcept):
            return _owl("Nothing")
        if isinstance(c, (Nominal, Not, And, Or)):
            b = self.fresh()
            out.append(Triple(b, RDF_TYPE, _owl("Class")))
            if isinstance(c, Nominal):
                members = [self.name(a) for a in c.individuals]
                out.append(Triple(b, _owl("oneOf"), self.collection(members, out)))
            elif isinstance(c, Not):
                out.append(Triple(b, _owl("complementOf"), self.concept(c.operand, out)))
            else:
                operands = [self.concept(x, out) for x in _flatten(c)]
                prop = "intersectionOf" if isinstance(c, And) else "unionOf"
                out.append(Triple(b, _owl(prop), self.collection(operands, out)))
            return b
        b = self.fresh()
        out.append(Triple(b, RDF_TYPE, _owl("Restriction")))
        if isinstance(c, AtLeast):
            out.append(Triple(b, _owl("minQualifiedCardinality"), integer(c.n)))
        elif isinstance(c, AtMost):
            out.append(Triple(b, _owl("maxQualifiedCardinality"), integer(c.n)))
        out.append(Triple(b, _owl("onProperty"), self.role(c.role, out)))
        if isinstance(c, SelfRestriction):
            out.append(Triple(b, _owl("hasSelf"), boolean(True)))
        elif isinstance(c, Exists):
            out.append(Triple(b, _owl("someValuesFrom"), self.concept(c.filler, out)))
        elif isinstance(c, Forall):
            out.append(Triple(b, _owl("allValuesFrom"), self.concept(c.filler, out)))
        elif isinstance(c, (AtLeast, AtMost)):
            out.append(Triple(b, _owl("onClass"), self.concept(c.filler, out)))
        else:
            raise TypeError(f"not a concept: {c!r}")
        return b

    def axiom(self, ax: Axiom) -> list[Triple]:
        out: list[Triple] = []
        if isinstance(ax, Ria):
            sup = self.role(ax.sup, out)
            chain = [self.role(r, out) for r in ax.chain]
            out.append(Triple(sup, _owl("propertyChainAxiom"), self.collection(chain, out)))
        elif isinstance(ax, tuple(CHARACTERISTIC_CLASSES)):
            out.append(Triple(self.role(ax.role, out), RDF_TYPE, CHARACTERISTIC_CLASSES[type(ax)]))
        elif isinstance(ax, Dis):
            first = self.role(ax.first, out)
            out.append(Triple(first, _owl("propertyDisjointWith"), self.role(ax.second, out)))
        elif isinstance(ax, Gci):
            sub = self.concept(ax.sub, out)
            out.append(Triple(sub, Iri(RDFS + "subClassOf"), self.concept(ax.sup, out)))
        elif isinstance(ax, ConceptAssertion):
            out.append(Triple(self.name(ax.individual), RDF_TYPE, self.concept(ax.concept, out)))
        elif isinstance(ax, RoleAssertion):
            a, b = self.name(ax.subject), self.name(ax.object)
            if isinstance(ax.role, InverseRole):
                out.append(Triple(b, self.name(ax.role.name), a))
            else:
                out.append(Triple(a, self.role(ax.role, out), b))
        elif isinstance(ax, NegativeRoleAssertion):
            b = self.fresh()
            out.append(Triple(b, RDF_TYPE, _owl("NegativePropertyAssertion")))
            out.append(Triple(b, _owl("assertionProperty"), self.role(ax.role, out)))
            out.append(Triple(b, _owl("sourceIndividual"), self.name(ax.subject)))
            out.append(Triple(b, _owl("targetIndividual"), self.name(ax.object)))
        elif isinstance(ax, Equality):
            out.append(Triple(self.name(ax.first), _owl("sameAs"), self.name(ax.second)))
        elif isinstance(ax, Inequality):
            out.append(Triple(self.name(ax.first), _owl("differentFrom"), self.name(ax.second)))
        else:
            raise TypeError(f"not an axiom: {ax!r}")
        return out


def _flatten(c: And | Or) -> list[Concept]:
    kind = type(c)
    out: list[Concept] = []
    for part in (c.left, c.right):
        out.extend(_flatten(part) if type(part) is kind else [part])
    return out


def prefix_env(namespace: str = DEFAULT_NAMESPACE) -> PrefixEnv:
    return PrefixEnv({**{k: STANDARD_PREFIXES[k] for k in ("owl", "rdfs", "rdf", "xsd")}, "": namespace})


def translate_role_expr(role: Role, namespace: str = DEFAULT_NAMESPACE) -> tuple[Term, list[Triple]]:
    out: list[Triple] = []
    return OwlTranslator(namespace).role(role, out), out


def translate_concept_expr(c: Concept, namespace: str = DEFAULT_NAMESPACE) -> tuple[Term, list[Triple]]:
    out: list[Triple] = []
    return OwlTranslator(namespace).concept(c, out), out


def translate_axiom(ax: Axiom, namespace: str = DEFAULT_NAMESPACE) -> list[Triple]:
    return OwlTranslator(namespace).axiom(ax)


def translate_kb(kb: KnowledgeBase, namespace: str = DEFAULT_NAMESPACE) -> TranslationOutput:
    tr = OwlTranslator(namespace)
    graph = Graph()
    sig = signature(kb)
    for c in sorted(sig.concepts | kb.vocabulary.concepts):
        graph.add(Triple(tr.name(c), RDF_TYPE, _owl("Class")))
    for r in sorted(sig.roles | kb.vocabulary.roles):
        graph.add(Triple(tr.name(r), RDF_TYPE, _owl("ObjectProperty")))
    for ax in kb.axioms():
        for t in tr.axiom(ax):
            graph.add(t)
    return TranslationOutput(graph, prefix_env(namespace))
