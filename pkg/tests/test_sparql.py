from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperkb.errors import ParseError
from hyperkb.rdf.graph import Graph
from hyperkb.rdf.terms import XSD_INTEGER, Iri, Literal, Triple
from hyperkb.rdf.turtle import parse_turtle
from hyperkb.sparql.engine import eval_bgp, eval_path, eval_select, format_tsv, table_to_json
from hyperkb.sparql.query import (
    Comparison, Edge, Inverse, Plus, Seq, TriplePattern, Var, format_path, parse_sparql,
)

from conftest import fixture_text
from oracles import matrix_plus, nested_loop_bgp

EX = "http://example.org/#"


def ex(local: str) -> Iri:
    return Iri(EX + local)


@pytest.fixture
def movies():
    g, env = parse_turtle(fixture_text("taxi-driver.ttl"))
    for t in parse_turtle(fixture_text("casino.ttl"))[0]:
        g.add(t)
    return g, env


def run(graph, text, prefixes=None):
    return eval_select(graph, parse_sparql(text, prefixes))


def test_taxi_driver_co_actors(taxi_graph):
    g, env = taxi_graph
    table = run(g, fixture_text("taxi-driver.rq"))
    assert table.as_set() == {(ex("scorsese"), ex("de-niro")), (ex("de-niro"), ex("scorsese"))}
    assert [v.name for v in table.header] == ["x1", "x2"]
    assert table_to_json(table, env) == {
        "columns": ["x1", "x2"],
        "rows": [{"x1": ":de-niro", "x2": ":scorsese"}, {"x1": ":scorsese", "x2": ":de-niro"}],
    }


def test_sequence_path(taxi_graph):
    g, env = taxi_graph
    q = "SELECT ?x ?y WHERE { ?x :actsIn/^:actsIn ?y . FILTER (?x != ?y) }"
    table = run(g, q, env.prefixes)
    assert len(table) == 2


def test_sequence_path_equals_manual_join(movies):
    g, env = movies
    via_path = run(g, "SELECT ?x ?y WHERE { ?x :actsIn/^:actsIn ?y }", env.prefixes)
    via_join = run(g, "SELECT ?x ?y WHERE { ?x :actsIn ?m . ?y :actsIn ?m }", env.prefixes)
    assert via_path.as_set() == via_join.as_set()


def test_plus_path_over_both_films(movies):
    g, env = movies
    table = run(g, "SELECT ?x ?y WHERE { ?x (:actsIn/^:actsIn)+ ?y }", env.prefixes)
    people = {ex("scorsese"), ex("de-niro"), ex("sharon-stone")}
    irreflexive = {(a, b) for a, b in table.as_set() if a != b}
    assert irreflexive == {(a, b) for a in people for b in people if a != b}
    step = eval_path(g, Seq(Edge(ex("actsIn")), Inverse(Edge(ex("actsIn")))))
    assert table.as_set() == matrix_plus(step)


def test_filter_numeric_and_string_comparison():
    g, _ = parse_turtle('@prefix : <http://e/> .\n:a :n 5 ; :s "b" .\n:b :n 12 ; :s "a" .')
    assert len(run(g, "SELECT ?x WHERE { ?x <http://e/n> ?v . FILTER (?v > 9) }")) == 1
    assert len(run(g, 'SELECT ?x WHERE { ?x <http://e/s> ?v . FILTER (?v < "b") }')) == 1


def test_tsv_output(taxi_graph):
    g, env = taxi_graph
    text = format_tsv(run(g, fixture_text("taxi-driver.rq")), env)
    assert text.splitlines() == ["?x1\t?x2", ":de-niro\t:scorsese", ":scorsese\t:de-niro"]


@pytest.mark.parametrize("text", [
    "SELECT ?x WHERE { ?x :p }",
    "SELECT WHERE { ?x <http://p> ?y }",
    "SELECT ?x WHERE { ?x nope:p ?y }",
    "SELECT ?x WHERE { ?x <http://p> ?y . FILTER (?y ~ 3) }",
])
def test_parse_errors(text):
    with pytest.raises(ParseError) as info:
        parse_sparql(text, {"": EX})
    assert info.value.line == 1


def test_path_printer_round_trip():
    q = parse_sparql("SELECT ?x WHERE { ?x (:a/^:b)+/:c ?y }", {"": EX})
    (clause,) = q.paths
    again = parse_sparql(f"SELECT ?x WHERE {{ ?x {format_path(clause.path)} ?y }}")
    assert again.paths[0].path == clause.path


# -- BGP evaluation against the nested-loop oracle ------------------------------------

NODES = [Iri(f"http://e/n{i}") for i in range(4)]
PREDS = [Iri(f"http://e/p{i}") for i in range(2)]
LITS = [Literal(str(i), datatype=XSD_INTEGER) for i in range(3)] + [Literal("x"), Literal("y")]
VARS = [Var(n) for n in "abcd"]

random_triples = st.lists(
    st.builds(Triple, st.sampled_from(NODES), st.sampled_from(PREDS), st.sampled_from(NODES + LITS)),
    max_size=30,
)
node_or_var = st.sampled_from(NODES + VARS)
patterns = st.lists(
    st.builds(TriplePattern, node_or_var, st.sampled_from(PREDS + VARS[:1]), st.sampled_from(NODES + LITS[:2] + VARS)),
    min_size=1, max_size=3,
)


@st.composite
def filters(draw, pats):
    used = [t for p in pats for t in (p.subject, p.predicate, p.object) if isinstance(t, Var)]
    if not used:
        return []
    operand = st.sampled_from(used + LITS[:2])
    return draw(st.lists(
        st.builds(Comparison, st.sampled_from(["==", "!=", "<", "<=", ">", ">="]), st.sampled_from(used), operand),
        max_size=2,
    ))


@settings(max_examples=600, deadline=None)
@given(random_triples, st.data())
def test_bgp_matches_nested_loops(triples, data):
    pats = data.draw(patterns)
    fs = data.draw(filters(pats))
    g = Graph(triples)
    expected = nested_loop_bgp(list(g), pats, fs)
    assert eval_bgp(g, pats, fs).as_set() == expected


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(st.sampled_from(NODES), st.sampled_from(NODES)), max_size=12))
def test_plus_matches_warshall(edges):
    g = Graph(Triple(a, PREDS[0], b) for a, b in edges)
    assert eval_path(g, Plus(Edge(PREDS[0]))) == matrix_plus(set(edges))
