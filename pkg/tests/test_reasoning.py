from __future__ import annotations

import time

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperkb.dl.reasoning import (
    Certificate, NoCountermodelUpTo, Refuted, answer_query, check_certificate, check_entailment,
    find_model, gci_witnesses, retrieve_instances,
)
from hyperkb.dl.semantics import satisfies_axiom, satisfies_kb
from hyperkb.dl.syntax import (
    BOTTOM, TOP, ConceptAssertion, ConceptName, Equality, Exists, Gci, Inequality, KnowledgeBase, Not,
    RoleName, Vocabulary,
)
from hyperkb.dl.text import parse_axiom, parse_kb, parse_pattern
from hyperkb.errors import BudgetExceeded

from oracles import naive_has_model
from strategies import axioms

ACTOR_PERSON = Gci(ConceptName("Actor"), ConceptName("Person"))
LIKES_SOMETHING = ConceptAssertion(Exists(RoleName("likes"), TOP), "de-niro")


def test_certificate_refutes_actor_subclass_person(movie_kb, interp_i):
    assert check_certificate(movie_kb, ACTOR_PERSON, interp_i) is Certificate.REFUTES_ENTAILMENT
    assert gci_witnesses(interp_i, ACTOR_PERSON) == {"i7"}


def test_non_model_is_no_certificate(movie_kb, interp_j):
    assert check_certificate(movie_kb, ACTOR_PERSON, interp_j) is Certificate.DOES_NOT_REFUTE


def test_satisfied_axiom_is_no_certificate(movie_kb, interp_i):
    director_person = Gci(ConceptName("Director"), ConceptName("Person"))
    assert check_certificate(movie_kb, director_person, interp_i) is Certificate.DOES_NOT_REFUTE


@pytest.mark.parametrize("bound", [1, 2])
def test_reduced_kb_entails_likes_something(reduced_kb, bound):
    assert check_entailment(reduced_kb, LIKES_SOMETHING, bound) == NoCountermodelUpTo(bound)


def test_reduced_kb_size_three_within_budget(reduced_kb):
    start = time.perf_counter()
    assert check_entailment(reduced_kb, LIKES_SOMETHING, 3) == NoCountermodelUpTo(3)
    assert time.perf_counter() - start < 60


def test_countermodel_is_a_real_countermodel(reduced_kb):
    ax = parse_axiom("Actor <= Director", reduced_kb.vocabulary)
    ax2 = parse_axiom("Director <= Actor", reduced_kb.vocabulary)
    for axiom in (ax, ax2):
        verdict = check_entailment(reduced_kb, axiom, 2)
        assert isinstance(verdict, Refuted)
        assert satisfies_kb(verdict.countermodel, reduced_kb)
        assert not satisfies_axiom(verdict.countermodel, axiom)


@pytest.mark.parametrize("text", ["individual a .\na != a .", "individual a .\nconcept C .\nC <= Bottom .\nC(a) ."])
def test_inconsistent_kbs_have_no_model(text):
    kb = parse_kb(text)
    start = time.perf_counter()
    for bound in (1, 2, 3):
        assert find_model(kb, bound) is None
    assert time.perf_counter() - start < 1


def test_inconsistent_kb_entails_everything():
    kb = parse_kb("individual a .\nconcept C .\na != a .")
    assert isinstance(check_entailment(kb, Gci(TOP, BOTTOM), 2), NoCountermodelUpTo)


def test_model_found_is_verified(reduced_kb):
    model = find_model(reduced_kb, 2)
    assert model is not None and satisfies_kb(model, reduced_kb)
    assert len(model.domain) == 1


def test_budget_guard(movie_kb):
    with pytest.raises(BudgetExceeded) as info:
        find_model(movie_kb, 3, budget=10**6)
    assert info.value.budget == 10**6
    assert info.value.needed > 10**6


def test_model_needs_two_elements():
    kb = parse_kb("individual a, b .\na != b .")
    assert find_model(kb, 1) is None
    assert len(find_model(kb, 2).domain) == 2


def test_retrieve_instances(reduced_kb):
    results = dict(retrieve_instances(reduced_kb, ConceptName("Actor"), 2))
    assert results == {"de-niro": NoCountermodelUpTo(2)}


def test_answer_query(reduced_kb):
    pattern = parse_pattern("Director(?x)", reduced_kb.vocabulary)
    assert answer_query(reduced_kb, pattern, 2) == [("de-niro",)]


def test_answer_query_excludes_non_entailed():
    kb = parse_kb("individual a, b .\nconcept C .\nC(a) .")
    pattern = parse_pattern("C(?x)", kb.vocabulary)
    assert answer_query(kb, pattern, 2) == [("a",)]


SMALL = dict(inds=("a", "b"), cnames=("A",), rnames=("r",), max_leaves=3)
SMALL_VOCAB = Vocabulary(frozenset("ab"), frozenset("A"), frozenset("r"))


@settings(max_examples=150, deadline=None)
@given(st.lists(axioms(**SMALL), min_size=1, max_size=3))
def test_find_model_agrees_with_naive_enumeration(axs):
    kb = KnowledgeBase.from_axioms(SMALL_VOCAB, axs)
    model = find_model(kb, 2)
    assert (model is not None) == naive_has_model(kb, 2)
    if model is not None:
        assert satisfies_kb(model, kb)


def _negation(goal):
    if isinstance(goal, ConceptAssertion):
        return ConceptAssertion(Not(goal.concept), goal.individual)
    if isinstance(goal, Equality):
        return Inequality(goal.first, goal.second)
    if isinstance(goal, Inequality):
        return Equality(goal.first, goal.second)
    return None


@settings(max_examples=150, deadline=None)
@given(st.lists(axioms(**SMALL), max_size=2), axioms(**SMALL))
def test_entailment_verdicts_are_sound(axs, goal):
    kb = KnowledgeBase.from_axioms(SMALL_VOCAB, axs)
    verdict = check_entailment(kb, goal, 2)
    if isinstance(verdict, Refuted):
        assert satisfies_kb(verdict.countermodel, kb)
        assert not satisfies_axiom(verdict.countermodel, goal)
    elif (negated := _negation(goal)) is not None:
        assert not naive_has_model(kb.with_axioms(negated), 2)
