from __future__ import annotations

import sys
from pathlib import Path

import pytest

from hyperkb.dl.interp_text import parse_interpretation
from hyperkb.dl.text import parse_kb
from hyperkb.hk.hsl import parse_hsl
from hyperkb.rdf.turtle import parse_turtle

FIXTURES = Path(__file__).parent / "fixtures"


def fixture_text(name: str) -> str:
    return (FIXTURES / name).read_text(encoding="utf-8")


@pytest.fixture
def movie_kb():
    return parse_kb(fixture_text("movie.dl"))


@pytest.fixture
def reduced_kb():
    return parse_kb(fixture_text("reduced.dl"))


@pytest.fixture
def interp_i():
    return parse_interpretation(fixture_text("movie-i.interp"))


@pytest.fixture
def interp_j():
    return parse_interpretation(fixture_text("j.interp"))


@pytest.fixture
def movie_base():
    return parse_hsl(fixture_text("movie-facts.hsl.json"))


@pytest.fixture
def marat_base():
    return parse_hsl(fixture_text("marat.hsl.json"))


@pytest.fixture
def taxi_graph():
    return parse_turtle(fixture_text("taxi-driver.ttl"))


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    if acceptance is None or not acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(acceptance.RESULTS):
        terminalreporter.write_line(acceptance.result_line(number))
