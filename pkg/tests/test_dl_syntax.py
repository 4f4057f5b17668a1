from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperkb.dl.syntax import (
    TOP, And, AtLeast, ConceptAssertion, ConceptName, Dis, Equality, Exists, Forall, Gci,
    Inequality, InverseRole, KnowledgeBase, NegativeRoleAssertion, Nominal, Not, Or, Ria,
    RoleAssertion, RoleName, SelfRestriction, Sym, Tra, Vocabulary, signature,
)
from hyperkb.dl.text import (
    format_axiom, format_concept, parse_axiom, parse_concept, parse_kb, parse_pattern, serialize_kb,
)
from hyperkb.errors import ParseError, VocabularyError

from strategies import axioms, concepts, VOCAB


def test_movie_kb_box_sizes(movie_kb):
    assert (len(movie_kb.abox), len(movie_kb.tbox), len(movie_kb.rbox)) == (7, 5, 2)
    assert len(movie_kb) == 14


def test_movie_kb_checkpoint_axioms(movie_kb):
    knows, directs = RoleName("knows"), RoleName("directs")
    assert Equality("kubrick", "stanley") in movie_kb.abox
    assert NegativeRoleAssertion(directs, "kubrick", "taxi-driver") in movie_kb.abox
    assert ConceptAssertion(AtLeast(2, knows, ConceptName("Actor")), "stanley") in movie_kb.abox
    assert Ria((directs, InverseRole("actsIn")), knows) in movie_kb.rbox
    assert Gci(ConceptName("Director"), ConceptName("Person")) in movie_kb.tbox


def test_movie_kb_round_trip(movie_kb):
    assert parse_kb(serialize_kb(movie_kb)) == movie_kb


def test_serialization_is_deterministic(movie_kb):
    assert serialize_kb(movie_kb) == serialize_kb(parse_kb(serialize_kb(movie_kb)))


def test_empty_kb():
    kb = parse_kb("")
    assert len(kb) == 0
    assert parse_kb(serialize_kb(kb)) == kb


def test_undeclared_name_is_rejected():
    with pytest.raises(VocabularyError):
        parse_kb("concept A .\nB(a) .")


def test_name_declared_twice_in_different_sets():
    with pytest.raises(VocabularyError):
        parse_kb("concept A .\nrole A .")


def test_parse_error_carries_position():
    with pytest.raises(ParseError) as info:
        parse_kb("concept A .\nA <= .")
    assert info.value.line == 2
    assert info.value.column is not None


def test_concept_precedence():
    v = Vocabulary(concepts={"A", "B", "C"}, roles={"r"})
    assert parse_concept("A or B and C", v) == Or(ConceptName("A"), And(ConceptName("B"), ConceptName("C")))
    assert parse_concept("not A and B", v) == And(Not(ConceptName("A")), ConceptName("B"))
    assert parse_concept("exists r . A and B", v) == Exists(RoleName("r"), And(ConceptName("A"), ConceptName("B")))
    assert parse_concept("exists r . Self", v) == SelfRestriction(RoleName("r"))
    assert parse_concept("forall r^- . Top", v) == Forall(InverseRole("r"), TOP)


def test_format_concept_parenthesizes_minimally():
    c = And(Or(ConceptName("A"), ConceptName("B")), ConceptName("C"))
    assert format_concept(c) == "(A or B) and C"


def test_assertion_prints_complex_concept_in_parentheses():
    ax = ConceptAssertion(And(ConceptName("Actor"), ConceptName("Director")), "de-niro")
    assert format_axiom(ax) == "(Actor and Director)(de-niro)"


def test_rbox_statements():
    v = Vocabulary(roles={"r", "s"})
    assert parse_axiom("Sym(r)", v) == Sym(RoleName("r"))
    assert parse_axiom("Tra(r^-)", v) == Tra(InverseRole("r"))
    assert parse_axiom("Dis(r, s)", v) == Dis(RoleName("r"), RoleName("s"))
    assert parse_axiom("r o s <= r", v) == Ria((RoleName("r"), RoleName("s")), RoleName("r"))
    assert parse_axiom("r <= s", v) == Ria((RoleName("r"),), RoleName("s"))


def test_abox_statements():
    v = Vocabulary(individuals={"a", "b"}, roles={"r"}, concepts={"C"})
    assert parse_axiom("r(a, b)", v) == RoleAssertion(RoleName("r"), "a", "b")
    assert parse_axiom("-r(a, b)", v) == NegativeRoleAssertion(RoleName("r"), "a", "b")
    assert parse_axiom("a = b", v) == Equality("a", "b")
    assert parse_axiom("a != b", v) == Inequality("a", "b")
    assert parse_axiom("{a, b}(a)", v) == ConceptAssertion(Nominal(("b", "a")), "a")


def test_pattern_with_variables():
    v = Vocabulary(individuals={"a"}, roles={"r"}, concepts={"C"})
    pattern = parse_pattern("C(?x) ; r(?x, a)", v)
    assert pattern == [ConceptAssertion(ConceptName("C"), "?x"), RoleAssertion(RoleName("r"), "?x", "a")]


def test_variables_rejected_outside_patterns():
    v = Vocabulary(concepts={"C"})
    with pytest.raises(ParseError):
        parse_axiom("C(?x)", v)


def test_signature_collects_names(movie_kb):
    sig = signature(movie_kb)
    assert sig.concepts == {"Director", "Actor", "Person"}
    assert sig.roles == {"directs", "knows", "likes", "actsIn"}
    assert {"kubrick", "good-shepherd", "a-bronx-tale"} <= sig.individuals


@settings(max_examples=300, deadline=None)
@given(concepts())
def test_concept_text_round_trip(c):
    assert parse_concept(format_concept(c), VOCAB) == c


@settings(max_examples=300, deadline=None)
@given(st.lists(axioms(), max_size=8))
def test_kb_text_round_trip(axs):
    kb = KnowledgeBase.from_axioms(VOCAB, axs)
    assert parse_kb(serialize_kb(kb)) == kb
