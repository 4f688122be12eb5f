from functools import lru_cache
from pathlib import Path

import pytest

from cyclictri import (
    PolytopeParams,
    enumerate_triangulations,
    make_arc,
    parse_arc,
    triangulation_from_json,
)

DATA = Path(__file__).parent / "data"

# (m, d) instances small enough to sweep exhaustively in every run.
SMALL = [(6, 1), (7, 1), (8, 2), (9, 2), (10, 3)]


def load(name):
    return triangulation_from_json((DATA / name).read_text())


def arcset(tri, *tokens):
    return {make_arc(parse_arc(t), tri.params) for t in tokens}


@lru_cache(maxsize=None)
def all_triangulations(m, d):
    return tuple(enumerate_triangulations(PolytopeParams(m, d)))


@pytest.fixture
def c84():
    return load("c84_cyclic.json")


@pytest.fixture
def c106():
    return load("c106_one_short.json")


@pytest.fixture
def c106_after():
    return load("c106_all_short.json")


@pytest.fixture
def mut_left():
    return load("mut_left.json")


@pytest.fixture
def mut_right():
    return load("mut_right.json")


@pytest.fixture
def hexagon_fan():
    return load("hexagon_fan.json")


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
