from __future__ import annotations

from hyperkb.dl.roles import Simplicity, classify_simple_roles, validate_kb
from hyperkb.dl.text import parse_kb


def test_chain_makes_knows_non_simple(movie_kb):
    classes = classify_simple_roles(movie_kb)
    assert classes["knows"] is Simplicity.NON_SIMPLE
    assert classes["directs"] is Simplicity.SIMPLE
    assert classes["likes"] is Simplicity.SIMPLE
    assert classes["actsIn"] is Simplicity.SIMPLE


def test_non_simplicity_propagates_upwards():
    kb = parse_kb("role r, s, t .\nr o r <= s .\ns <= t .")
    classes = classify_simple_roles(kb)
    assert classes["s"] is Simplicity.NON_SIMPLE
    assert classes["t"] is Simplicity.NON_SIMPLE
    assert classes["r"] is Simplicity.SIMPLE


def test_movie_kb_uses_non_simple_knows_in_counting(movie_kb):
    # knows is the super-role of a length-2 chain yet sits inside >= restrictions
    report = validate_kb(movie_kb)
    assert not report.ok
    assert len(report) == 2
    assert all("knows" in v.message for v in report)


def test_reduced_kb_is_valid(reduced_kb):
    assert validate_kb(reduced_kb).ok


def test_non_simple_role_in_irr_and_dis():
    kb = parse_kb("role r, s, t .\nr o r <= s .\nIrr(s) .\nDis(s, t) .\nAsy(s) .")
    assert len(validate_kb(kb)) == 3


def test_non_simple_self_restriction():
    kb = parse_kb("concept A .\nrole r, s .\nr o r <= s .\nA <= exists s . Self .")
    assert len(validate_kb(kb)) == 1


def test_universal_role_in_characteristic():
    kb = parse_kb("role r .\nSym(U) .")
    report = validate_kb(kb)
    assert len(report) == 1
