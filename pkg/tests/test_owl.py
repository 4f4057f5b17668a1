from __future__ import annotations

import rdflib
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperkb.dl.syntax import ConceptName, Gci, InverseRole, KnowledgeBase, Not, RoleAssertion
from hyperkb.owl import DEFAULT_NAMESPACE, RDF_TYPE, translate_axiom, translate_concept_expr, translate_kb
from hyperkb.rdf.graph import Graph, collection_items
from hyperkb.rdf.iso import isomorphic
from hyperkb.rdf.terms import OWL, RDFS, BNode, Iri, Triple
from hyperkb.rdf.turtle import parse_turtle, serialize_turtle

from oracles import from_rdflib
from strategies import VOCAB, axioms

NS = DEFAULT_NAMESPACE


def n(local: str) -> Iri:
    return Iri(NS + local)


def owl(local: str) -> Iri:
    return Iri(OWL + local)


def test_gci_becomes_subclass_of(movie_kb):
    g = translate_kb(movie_kb).graph
    assert Triple(n("Director"), Iri(RDFS + "subClassOf"), n("Person")) in g


def test_negative_assertion_block(movie_kb):
    g = translate_kb(movie_kb).graph
    (b,) = [t.subject for t in g.match(None, RDF_TYPE, owl("NegativePropertyAssertion"))]
    assert isinstance(b, BNode)
    assert set(g.match(b)) == {
        Triple(b, RDF_TYPE, owl("NegativePropertyAssertion")),
        Triple(b, owl("assertionProperty"), n("directs")),
        Triple(b, owl("sourceIndividual"), n("kubrick")),
        Triple(b, owl("targetIndividual"), n("taxi-driver")),
    }


def test_equality_becomes_same_as(movie_kb):
    g = translate_kb(movie_kb).graph
    assert Triple(n("kubrick"), owl("sameAs"), n("stanley")) in g


def test_role_chain(movie_kb):
    g = translate_kb(movie_kb).graph
    (head,) = g.objects(n("knows"), owl("propertyChainAxiom"))
    first, second = collection_items(g, head)
    assert first == n("directs")
    assert isinstance(second, BNode)
    assert g.value(second, owl("inverseOf")) == n("actsIn")


def test_declarations(movie_kb):
    g = translate_kb(movie_kb).graph

    def declared(kind):
        return {t.subject for t in g.match(None, RDF_TYPE, owl(kind)) if isinstance(t.subject, Iri)}

    assert len(declared("Class")) == 3
    assert len(declared("ObjectProperty")) == 4


def test_complement_and_bnode_counter():
    c = Not(ConceptName("A"))
    node, triples = translate_concept_expr(c)
    assert node == BNode("b0")
    assert Triple(node, owl("complementOf"), n("A")) in triples


def test_inverse_role_assertion_swaps_arguments():
    triples = translate_axiom(RoleAssertion(InverseRole("r"), "a", "b"))
    assert triples == [Triple(n("b"), n("r"), n("a"))]


def test_output_round_trips_through_turtle(movie_kb):
    out = translate_kb(movie_kb)
    text = serialize_turtle(out.graph, out.prefix_env)
    again, _ = parse_turtle(text)
    assert isomorphic(again, out.graph)


def test_rdflib_parses_output(movie_kb):
    out = translate_kb(movie_kb)
    theirs = rdflib.Graph().parse(data=serialize_turtle(out.graph, out.prefix_env), format="turtle")
    assert isomorphic(from_rdflib(theirs), out.graph)


def test_translation_is_deterministic(movie_kb):
    assert translate_kb(movie_kb).graph == translate_kb(movie_kb).graph


@settings(max_examples=200, deadline=None)
@given(st.lists(axioms(), max_size=5))
def test_random_translations_are_well_formed(axs):
    out = translate_kb(KnowledgeBase.from_axioms(VOCAB, axs))
    text = serialize_turtle(out.graph, out.prefix_env)
    assert isomorphic(parse_turtle(text)[0], out.graph)
    # every blank node heads at least one description
    for b in out.graph.blank_nodes():
        assert next(out.graph.match(b), None) is not None


def test_gci_between_complex_concepts_uses_fresh_nodes():
    ax = Gci(Not(ConceptName("A")), Not(ConceptName("B")))
    triples = translate_axiom(ax)
    g = Graph(triples)
    (t,) = g.match(None, Iri(RDFS + "subClassOf"), None)
    assert isinstance(t.subject, BNode) and isinstance(t.object, BNode)
    assert t.subject != t.object
