from __future__ import annotations

import pytest
from hypothesis import given, settings

from hyperkb.dl.interp_text import format_interpretation, parse_interpretation
from hyperkb.dl.semantics import (
    Interpretation, compose, interpret_concept, interpret_role, satisfies_axiom, satisfies_kb,
)
from hyperkb.dl.syntax import (
    BOTTOM, TOP, U, And, AtLeast, AtMost, ConceptName, Equality, Exists, Forall, Gci,
    InverseRole, Not, Or, RoleName,
)
from hyperkb.errors import InterpretationError, ParseError, UnmappedNameError

from oracles import concept_extension
from strategies import concepts, interpretations, roles_with_u


def test_interpretation_i_is_a_model(movie_kb, interp_i):
    result = satisfies_kb(interp_i, movie_kb)
    assert result.satisfied
    assert list(result.failing) == []


def test_j_fails_only_the_equality(movie_kb, interp_j):
    result = satisfies_kb(interp_j, movie_kb)
    assert not result
    assert list(result.failing) == [Equality("kubrick", "stanley")]


def test_director_subclass_person_extension(interp_i):
    assert interpret_concept(interp_i, ConceptName("Director")) <= interpret_concept(interp_i, ConceptName("Person"))
    assert interpret_concept(interp_i, ConceptName("Actor")) - interpret_concept(interp_i, ConceptName("Person")) == {"i7"}


def test_knows_chain_is_contained(interp_i):
    chain = compose(interpret_role(interp_i, RoleName("directs")), interpret_role(interp_i, InverseRole("actsIn")))
    assert chain <= interpret_role(interp_i, RoleName("knows"))


def test_universal_role_is_full_relation(interp_i):
    assert len(interpret_role(interp_i, U)) == len(interp_i.domain) ** 2


def test_unmapped_name_raises(movie_kb):
    tiny = Interpretation(("d",), {}, {}, {})
    with pytest.raises(UnmappedNameError):
        satisfies_kb(tiny, movie_kb)


def test_empty_domain_rejected():
    with pytest.raises(InterpretationError):
        Interpretation((), {}, {}, {})


def test_out_of_domain_element_rejected():
    with pytest.raises(InterpretationError):
        Interpretation(("d",), {"a": "e"}, {}, {})


def test_interpretation_text_round_trip(interp_i):
    assert parse_interpretation(format_interpretation(interp_i)) == interp_i


def test_interpretation_parse_error_has_line():
    with pytest.raises(ParseError) as info:
        parse_interpretation("domain d .\nmap a d .")
    assert info.value.line == 2


def test_gci_with_top_and_bottom(interp_i):
    assert satisfies_axiom(interp_i, Gci(BOTTOM, ConceptName("Actor")))
    assert not satisfies_axiom(interp_i, Gci(TOP, ConceptName("Actor")))


# -- identities over random (concept, interpretation) pairs -----------------------------

PAIRS = settings(max_examples=1000, deadline=None)


@PAIRS
@given(concepts(), concepts(), interpretations())
def test_de_morgan(c, d, i):
    assert interpret_concept(i, Not(And(c, d))) == interpret_concept(i, Or(Not(c), Not(d)))
    assert interpret_concept(i, Not(Or(c, d))) == interpret_concept(i, And(Not(c), Not(d)))


@PAIRS
@given(roles_with_u, concepts(), interpretations())
def test_quantifier_duality(r, c, i):
    assert interpret_concept(i, Forall(r, c)) == interpret_concept(i, Not(Exists(r, Not(c))))
    assert interpret_concept(i, Exists(r, c)) == interpret_concept(i, AtLeast(1, r, c))


@PAIRS
@given(roles_with_u, concepts(), interpretations())
def test_cardinality_complement(r, c, i):
    for n in range(4):
        assert interpret_concept(i, AtMost(n, r, c)) == interpret_concept(i, Not(AtLeast(n + 1, r, c)))
    assert interpret_concept(i, AtLeast(0, r, c)) == i.elements


@PAIRS
@given(concepts(), interpretations())
def test_set_semantics_matches_elementwise_oracle(c, i):
    assert interpret_concept(i, c) == concept_extension(i, c)
