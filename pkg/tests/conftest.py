from __future__ import annotations

from pathlib import Path

import pytest
from hypothesis import strategies as st

from pgqbf.game import make_game

DATA = Path(__file__).parent / "data"

# acceptance lines collected by test_acceptance.py, echoed at the end of the run
ACCEPTANCE: dict[int, str] = {}


@pytest.fixture
def appendix_text() -> str:
    return (DATA / "ttt_appendix.pg").read_text()


@st.composite
def small_games(draw, max_vertices: int = 6, firstmoves: bool = True, white_sets: bool = True):
    """Random games on up to ``max_vertices`` vertices with arbitrary timelines."""
    n = draw(st.integers(1, max_vertices))
    vertex = st.integers(1, n)
    edge = st.frozensets(vertex, min_size=1, max_size=min(3, n))
    players = draw(st.lists(st.sampled_from("BW"), max_size=n))
    black = draw(st.lists(edge, max_size=4))
    white = draw(st.lists(edge, max_size=3)) if white_sets else []
    first = None
    if firstmoves and players and players[0] == "B" and draw(st.booleans()):
        first = draw(st.frozensets(vertex, min_size=1))
    return make_game([f"v{i}" for i in range(1, n + 1)], players, black, white, firstmoves=first)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[k])
