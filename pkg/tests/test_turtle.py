from __future__ import annotations

import pytest
import rdflib
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperkb.errors import ParseError, TermPositionError
from hyperkb.rdf.graph import Graph, collection_items
from hyperkb.rdf.iso import isomorphic
from hyperkb.rdf.terms import XSD_INTEGER, BNode, Iri, Literal, Triple
from hyperkb.rdf.turtle import PrefixEnv, parse_turtle, serialize_turtle

from conftest import fixture_text
from oracles import from_rdflib

EX = "http://example.org/#"


def test_flat_and_abbreviated_forms_are_equal():
    flat, _ = parse_turtle(fixture_text("song-flat.ttl"))
    abbrev, _ = parse_turtle(fixture_text("song-abbrev.ttl"))
    assert flat == abbrev
    assert len(flat) == 3
    song = Iri("http://example.org/data/song.mp3")
    assert flat.value(song, Iri(EX + "size")) == Literal("10240", datatype=XSD_INTEGER)


def test_relative_iri_resolution():
    g, env = parse_turtle("@base <http://a.org/x/y> .\n<../z> <p> <#frag> .")
    (t,) = g
    assert t.subject == Iri("http://a.org/z")
    assert t.predicate == Iri("http://a.org/x/p")
    assert t.object == Iri("http://a.org/x/y#frag")
    assert env.base == "http://a.org/x/y"


def test_sparql_style_directives_and_a():
    g, env = parse_turtle("PREFIX ex: <http://e/>\nex:s a ex:C .")
    assert Triple(Iri("http://e/s"), Iri("http://www.w3.org/1999/02/22-rdf-syntax-ns#type"), Iri("http://e/C")) in g
    assert env.prefixes == {"ex": "http://e/"}


def test_blank_nodes_and_collections():
    g, _ = parse_turtle("@prefix : <http://e/> .\n:s :p [ :q 1 ] ; :list ( 1 2 3 ) .\n_:x :p _:x .")
    head = g.value(Iri("http://e/s"), Iri("http://e/list"))
    assert collection_items(g, head) == [Literal(str(i), datatype=XSD_INTEGER) for i in (1, 2, 3)]
    assert len(g.blank_nodes()) == 5


def test_literal_forms():
    g, _ = parse_turtle('@prefix : <http://e/> .\n:s :p "a\\tb"@EN, """multi\nline""", 1.5, 1e3, true .')
    objects = set(g.objects(Iri("http://e/s"), Iri("http://e/p")))
    assert Literal("a\tb", language="en") in objects
    assert Literal("multi\nline") in objects
    assert len(objects) == 5


@pytest.mark.parametrize("text, line", [
    ("@prefix : <http://e/> .\n:s :p .", 2),
    ("@prefix : <http://e/> .\n:s :p :o", 2),
    ("<http://s> <http://p> <http://o> .\n\nnope:s <http://p> <http://o> .", 3),
    ('<http://s> <http://p> "unterminated .', 1),
])
def test_errors_carry_position(text, line):
    with pytest.raises(ParseError) as info:
        parse_turtle(text)
    assert info.value.line == line
    assert info.value.column is not None and info.value.column >= 1


def test_literal_subject_rejected():
    with pytest.raises((ParseError, TermPositionError)):
        parse_turtle('"lit" <http://p> <http://o> .')


def test_empty_document():
    g, _ = parse_turtle("")
    assert len(g) == 0
    assert serialize_turtle(g) == ""


def test_fixture_round_trip(taxi_graph):
    g, env = taxi_graph
    again, _ = parse_turtle(serialize_turtle(g, env))
    assert again == g


def test_serialization_is_deterministic(taxi_graph):
    g, env = taxi_graph
    text = serialize_turtle(g, env)
    assert serialize_turtle(parse_turtle(text)[0], env) == text


@pytest.mark.parametrize("name", ["taxi-driver.ttl", "casino.ttl", "song-flat.ttl", "song-abbrev.ttl"])
def test_agrees_with_rdflib(name):
    text = fixture_text(name)
    ours, _ = parse_turtle(text)
    theirs = from_rdflib(rdflib.Graph().parse(data=text, format="turtle"))
    assert isomorphic(ours, theirs)


def test_rdflib_reads_our_output(taxi_graph):
    g, env = taxi_graph
    theirs = from_rdflib(rdflib.Graph().parse(data=serialize_turtle(g, env), format="turtle"))
    assert isomorphic(g, theirs)


def test_isomorphism_ignores_labels_only():
    a, _ = parse_turtle("_:x <http://p> _:y .\n_:y <http://p> _:x .")
    b, _ = parse_turtle("_:m <http://p> _:n .\n_:n <http://p> _:m .")
    c, _ = parse_turtle("_:m <http://p> _:m .")
    assert isomorphic(a, b)
    assert not isomorphic(a, c)


# -- random graphs --------------------------------------------------------------------

iris = st.sampled_from(["http://e/a", "http://e/b", "http://e/c-d", "http://f/x#y", "http://e/"]).map(Iri)
bnodes = st.sampled_from(["b0", "b1", "b2"]).map(BNode)
texts = st.text(st.characters(blacklist_categories=("Cs",)), max_size=8)
literals = st.one_of(
    texts.map(Literal),
    st.builds(Literal, texts, st.sampled_from(["en", "fr-be"])),
    st.integers(-50, 50).map(lambda n: Literal(str(n), datatype=XSD_INTEGER)),
    st.builds(Literal, texts, st.none(), st.sampled_from(["http://e/dt", "http://www.w3.org/2001/XMLSchema#date"])),
)
triples = st.builds(Triple, st.one_of(iris, bnodes), iris, st.one_of(iris, bnodes, literals))
graphs = st.lists(triples, max_size=20).map(Graph)
ENV = PrefixEnv({"e": "http://e/", "xsd": "http://www.w3.org/2001/XMLSchema#"})


@settings(max_examples=300, deadline=None)
@given(graphs, st.booleans())
def test_random_round_trip(g, with_prefixes):
    text = serialize_turtle(g, ENV if with_prefixes else None)
    again, _ = parse_turtle(text)
    assert isomorphic(g, again)


@settings(max_examples=100, deadline=None)
@given(graphs)
def test_random_output_readable_by_rdflib(g):
    theirs = from_rdflib(rdflib.Graph().parse(data=serialize_turtle(g, ENV), format="turtle"))
    assert isomorphic(g, theirs)
