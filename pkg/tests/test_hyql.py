from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperkb.errors import BudgetExceeded, ParseError, QueryError
from hyperkb.hk.hsl import parse_elements, parse_hsl
from hyperkb.hk.model import SpatialAnchor, TemporalAnchor
from hyperkb.hyql.engine import eval_hyql
from hyperkb.hyql.query import Decl, RelClause, VarRef, format_hyql, parse_hyql
from hyperkb.hyql.relations import SPACE_OPS, TEMPORAL, spatial_relate, temporal_relate

from conftest import fixture_text
from oracles import cells

WORKED = [
    ("select Director", {"kubrick", "stanley", "de-niro"}),
    ("select Director where Director directs space-odyssey", {"kubrick", "stanley"}),
    ('select Director where Director.uri == "http://example.org/kubrick.jpg" and Director.type != "Reference"',
     {"kubrick"}),
]


def answers(base, text) -> set:
    return set(eval_hyql(base, text).column())


@pytest.mark.parametrize("text, expected", WORKED)
def test_worked_queries(movie_base, text, expected):
    assert answers(movie_base, text) == expected


def test_count_actor(movie_base):
    result = eval_hyql(movie_base, "select count Actor")
    assert result.aggregate == 1
    assert result.to_json() == {"aggregate": 1}


def test_spatial_query(marat_base):
    assert eval_hyql(marat_base, "select Picture where Person above Knife").column() == ["picture"]
    assert eval_hyql(marat_base, "select Picture where Person bellow Knife").column() == []
    assert eval_hyql(marat_base, "select Picture where Person below Knife").column() == []
    assert eval_hyql(marat_base, "select Picture where Knife bellow Person").column() == ["picture"]


def test_implicit_declarations():
    q = parse_hyql("select Director")
    assert q.decls == (Decl("Director", "concept", "Director", implicit=True),)
    assert q.modifier is None and q.where == ()


def test_spatial_clause_shape():
    q = parse_hyql("select Picture where Person above Knife")
    assert q.where == (RelClause(VarRef("Person"), "above", VarRef("Knife")),)


def test_let_list_forms_agree():
    assert parse_hyql("let a as Actor, b select a") == parse_hyql("let a as Actor, let b select a")
    assert parse_hyql("let a as Actor let b select a") == parse_hyql("let a as Actor, let b select a")


def test_let_declarations_and_link_clause(movie_base):
    q = "let d as Director, l : directs, m select d, m where l [subject: d object: m]"
    result = eval_hyql(movie_base, q)
    assert set(result.rows) == {("kubrick", "space-odyssey"), ("stanley", "space-odyssey")}


def test_context_clause(movie_base):
    assert answers(movie_base, "let x as Person select x where x from ABox-Context") == {"kubrick", "stanley", "de-niro"}
    assert answers(movie_base, "let x as Person select x where x from TBox-Context") == set()


def test_functions(movie_base):
    assert answers(movie_base, "select id(Director)") == {"kubrick", "de-niro"}
    assert answers(movie_base, "select Director where count(Director) >= 2") == {"kubrick", "stanley"}


def test_attribute_targets(movie_base):
    result = eval_hyql(movie_base, "select Director.type")
    assert set(result.column()) == {"Data", "Reference"}


def test_min_max_aggregates(marat_base):
    assert eval_hyql(marat_base, "let a as Person select max a.y").aggregate == 334
    assert eval_hyql(marat_base, "let a as Knife select sum a.w").aggregate == 160


@pytest.mark.parametrize("text", [
    "Director",
    "select",
    "select Director where",
    "select Director where Director ==",
    "select Director where Director.uri",
    "select frob(Director)",
    "select Director where Director above",
    "let x as A, x as B select x",
    'select Director where Director.uri == "unterminated',
])
def test_parse_errors(text):
    with pytest.raises(ParseError) as info:
        parse_hyql(text)
    assert info.value.line == 1 and info.value.column >= 1


def test_parse_error_position_on_later_line():
    with pytest.raises(ParseError) as info:
        parse_hyql("select Director\nwhere Director ?? x")
    assert (info.value.line, info.value.column) == (2, 16)


def test_unknown_concept(movie_base):
    with pytest.raises(QueryError):
        eval_hyql(movie_base, "select Ghost")


def test_type_error_in_comparison(movie_base):
    with pytest.raises(QueryError):
        eval_hyql(movie_base, "select Director where Director.uri < 3")


def test_budget(movie_base):
    with pytest.raises(BudgetExceeded):
        eval_hyql(movie_base, "let a, b, c select a where a knows b", budget=100)


def test_count_equals_distinct_cardinality(movie_base, marat_base):
    for base in (movie_base, marat_base):
        for node in base.nodes():
            if node.is_concept:
                count = eval_hyql(base, f"select count {node.id}").aggregate
                assert count == len(eval_hyql(base, f"select distinct {node.id}").rows)
                assert count == len(base.instances_of(node.id))


# -- relations ------------------------------------------------------------------------


def rect(x, y, w, h, owner="n", ident="r"):
    return SpatialAnchor(ident, owner, x, y, w, h)


def interval(b, e, owner="n"):
    return TemporalAnchor("t", owner, b, e)


def test_marat_above_knife(marat_base):
    anchors = marat_base.get_node("picture").anchors
    marat, knife = anchors["marat"], anchors["knife"]
    assert marat.y + marat.h <= knife.y
    assert spatial_relate(marat, knife, "above")
    assert not spatial_relate(knife, marat, "above")


def test_relation_errors():
    with pytest.raises(QueryError):
        spatial_relate(rect(0, 0, 1, 1, "a"), rect(0, 0, 1, 1, "b"), "above")
    with pytest.raises(QueryError):
        spatial_relate(rect(0, 0, 1, 1), interval(0, 1), "above")
    with pytest.raises(QueryError):
        temporal_relate(interval(0, 1), rect(0, 0, 1, 1), "before")
    with pytest.raises(QueryError):
        temporal_relate(interval(0, 1), interval(2, 3), "sideways")


def test_time_relations_cross_media():
    assert temporal_relate(interval(10, 20, "a"), interval(30, 40, "b"), "before")
    assert temporal_relate(interval(10, 20), interval(10, 20), "equals")


boxes = st.builds(rect, st.integers(0, 8), st.integers(0, 8), st.integers(1, 5), st.integers(1, 5))


@settings(max_examples=500, deadline=None)
@given(boxes)
def test_nothing_is_above_itself(a):
    assert not spatial_relate(a, a, "above")


@settings(max_examples=1000, deadline=None)
@given(boxes, boxes)
def test_rectangles_against_cell_oracle(a, b):
    ca, cb = cells(int(a.x), int(a.y), int(a.w), int(a.h)), cells(int(b.x), int(b.y), int(b.w), int(b.h))
    assert spatial_relate(a, b, "collides") == bool(ca & cb) == spatial_relate(b, a, "collides")
    assert spatial_relate(a, b, "contains") == (cb <= ca)
    assert spatial_relate(a, b, "above") == (max(j for _, j in ca) < min(j for _, j in cb))
    assert spatial_relate(a, b, "above") == spatial_relate(b, a, "bellow")
    assert spatial_relate(a, b, "side") == spatial_relate(b, a, "side")
    rows_a, rows_b = {j for _, j in ca}, {j for _, j in cb}
    cols_a, cols_b = {i for i, _ in ca}, {i for i, _ in cb}
    assert spatial_relate(a, b, "side") == (not cols_a & cols_b and bool(rows_a & rows_b))


def _allen_13(a, b):
    swap = ("after", "meets", "overlaps", "start", "during", "finishes")
    forward = [TEMPORAL[op](a, b) for op in TEMPORAL]
    converse = [TEMPORAL[op](b, a) for op in swap if op != "after"]
    return forward + converse


def test_allen_relations_are_exhaustive_and_exclusive():
    spans = [(b, e) for b in range(7) for e in range(b + 1, 7)]
    for (b1, e1), (b2, e2) in itertools.product(spans, repeat=2):
        verdicts = _allen_13(interval(b1, e1), interval(b2, e2))
        assert len(verdicts) == 13
        assert sum(verdicts) == 1, ((b1, e1), (b2, e2))


@settings(max_examples=500, deadline=None)
@given(st.integers(0, 20), st.integers(1, 10), st.integers(0, 20), st.integers(1, 10))
def test_before_after_are_converses(b1, d1, b2, d2):
    a, b = interval(b1, b1 + d1), interval(b2, b2 + d2)
    assert temporal_relate(a, b, "before") == temporal_relate(b, a, "after")


# -- pretty-printer and locality --------------------------------------------------------

names = st.sampled_from(["Director", "Actor", "x", "y"])
ops = st.sampled_from(["==", "!=", "<", "<=", ">", ">="])
values = st.one_of(st.integers(0, 99).map(str), st.sampled_from(['"a"', '"b c"', "true", "2.5"]))
clauses = st.one_of(
    st.builds("{}.uri {} {}".format, names, ops, values),
    st.builds("{} {} {}".format, names, st.sampled_from(SPACE_OPS + ("before", "meets")), names),
    st.builds("{} knows {}".format, names, names),
    st.builds("{} from ctx".format, names),
    st.builds("count({}) {} {}".format, names, ops, st.integers(0, 3).map(str)),
    st.builds("l [subject: {} object: {}]".format, names, names),
)
queries = st.builds(
    lambda mod, targets, where: (
        f"let x as Director, y, l : knows select {mod}{', '.join(targets)}"
        + (f" where {' and '.join(where)}" if where else "")
    ),
    st.sampled_from(["", "distinct ", "count "]),
    st.lists(st.one_of(names, names.map("{}.uri".format), names.map("id({})".format)), min_size=1, max_size=2),
    st.lists(clauses, max_size=3),
)


@settings(max_examples=300, deadline=None)
@given(queries)
def test_printer_is_idempotent(text):
    q = parse_hyql(text)
    printed = format_hyql(q)
    assert parse_hyql(printed) == q
    assert format_hyql(parse_hyql(printed)) == printed


LOCALITY_QUERIES = [text for text, _ in WORKED] + [
    "select count Actor",
    "let d as Director, l : directs, m select d, m where l [subject: d object: m]",
]

unrelated = st.one_of(
    st.builds(lambda i, u: ["node", f"extra-{i}", {"type": "Data", "uri": u}], st.integers(0, 9), st.text(max_size=5)),
    st.builds(lambda i: ["node", f"Extra{i}", {"type": "Concept"}], st.integers(0, 9)),
    st.builds(lambda i: ["context", f"extra-ctx-{i}", [["node", f"inner-{i}", {"type": "Data"}]]], st.integers(0, 9)),
)


@settings(max_examples=100, deadline=None)
@given(st.lists(unrelated, min_size=1, max_size=3, unique_by=lambda e: e[1]))
def test_unrelated_additions_do_not_change_answers(extra):
    base = parse_hsl(fixture_text("movie-facts.hsl.json"))
    before = [eval_hyql(base, q).to_json() for q in LOCALITY_QUERIES]
    base.add_entities(parse_elements(extra))
    assert [eval_hyql(base, q).to_json() for q in LOCALITY_QUERIES] == before
