"""Generator counts, each checked against an independent brute-force count."""

import itertools

import pytest

from pgqbf.game import GameSpecError, parse_pg, reduce_initials, write_pg
from pgqbf.generators import (
    POLYOMINOES,
    apply_opening,
    cell_name,
    gen_hex,
    gen_lines_game,
    gen_polyomino_game,
    gen_qubic,
    hex_connects,
    hex_minimal_paths,
    line_cells,
    qubic_lines,
    triangle_firstmoves,
)

from brute import hex_minimal_by_subsets, lines_by_endpoints, lines_by_subsets, qubic_lines_by_quadruples


def closed_form(rows, cols, k):
    horizontal = rows * max(cols - k + 1, 0)
    vertical = cols * max(rows - k + 1, 0)
    diagonal = 2 * max(rows - k + 1, 0) * max(cols - k + 1, 0)
    return horizontal + vertical + diagonal if k > 1 else rows * cols


def test_cell_names():
    assert [cell_name(0, 0), cell_name(2, 2), cell_name(25, 0), cell_name(26, 4)] == ["a1", "c3", "z1", "aa5"]


def test_tictactoe_lines():
    g = gen_lines_game(3, 3, 3)
    assert len(g.ewins_black) == 8 and g.ewins_black == g.ewins_white
    assert g.n == 9 and g.depth == 9


def test_gomoku_line_count():
    assert len(line_cells(15, 15, 5)) == 572 == closed_form(15, 15, 5)
    assert set(line_cells(15, 15, 5)) == lines_by_endpoints(15, 15, 5)


@pytest.mark.parametrize("rows, cols", [(r, c) for r in range(1, 7) for c in range(1, 7)])
def test_lines_closed_form(rows, cols):
    for k in range(1, max(rows, cols) + 1):
        edges = line_cells(rows, cols, k)
        if k > 1:
            assert len(edges) == len(set(edges)) == closed_form(rows, cols, k)


@pytest.mark.parametrize("rows, cols, k", [(3, 3, 3), (3, 4, 2), (4, 4, 3), (2, 5, 4), (4, 4, 4), (5, 3, 3)])
def test_lines_brute_force(rows, cols, k):
    assert set(line_cells(rows, cols, k)) == lines_by_subsets(rows, cols, k) == lines_by_endpoints(rows, cols, k)


def test_triangle():
    assert triangle_firstmoves(3, 3) == {1, 2, 5}
    assert triangle_firstmoves(4, 4) == {1, 2, 6}
    assert gen_lines_game(3, 3, 3, firstmoves=True).firstmoves == {1, 2, 5}


def test_qubic_lines_by_collinear_quadruples():
    brute = qubic_lines_by_quadruples()
    assert len(brute) == 76
    assert set(qubic_lines()) == brute


def test_qubic_game():
    g = gen_qubic()
    assert g.n == 64 and len(g.ewins_black) == 76 and g.depth == 64
    per_vertex = [sum(v in e for e in g.ewins_black) for v in range(1, 65)]
    assert min(per_vertex) >= 4 and sum(per_vertex) == 76 * 4


@pytest.mark.parametrize("n", [1, 2, 3])
def test_hex_minimal_sets_brute_force(n):
    assert set(hex_minimal_paths(n)) == hex_minimal_by_subsets(n)


def test_hex_counts():
    assert [len(hex_minimal_paths(n)) for n in range(1, 6)] == [1, 3, 11, 54, 365]
    assert set(hex_minimal_paths(2)) == {
        frozenset({(0, 0), (1, 0)}), frozenset({(0, 1), (1, 1)}), frozenset({(0, 1), (1, 0)})
    }
    g = gen_hex(2)
    assert g.ewins_white == () and len(g.ewins_black) == 3


def test_hex_sets_are_minimal():
    n = 4
    sets = hex_minimal_paths(n)
    for s in sets:
        assert hex_connects(n, set(s))
        assert not any(hex_connects(n, set(s - {x})) for x in s)


def test_hex_cap():
    with pytest.raises(GameSpecError):
        gen_hex(6)
    with pytest.raises(GameSpecError):
        gen_hex(0)


@pytest.mark.parametrize("name, count", [("monomino", 1), ("domino", 2), ("tromino_i", 2),
                                          ("tromino_l", 4), ("tetromino_l", 8), ("snaky", 8)])
def test_polyomino_orientations(name, count):
    assert len(POLYOMINOES[name].orientations()) == count


def brute_placements(poly, n):
    """Subsets of the board congruent to the shape (rotations and reflections)."""
    size = len(poly.cells)
    shapes = set(poly.orientations())
    found = set()
    coords = [(r, c) for r in range(n) for c in range(n)]
    for combo in itertools.combinations(coords, size):
        r0 = min(r for r, _ in combo)
        c0 = min(c for _, c in combo)
        if frozenset((r - r0, c - c0) for r, c in combo) in shapes:
            found.add(frozenset(combo))
    return found


@pytest.mark.parametrize("name, n, count", [("domino", 2, 4), ("domino", 3, 12), ("tromino_l", 2, 4),
                                             ("tromino_l", 3, 16), ("tromino_i", 3, 6), ("snaky", 9, 320)])
def test_polyomino_placements(name, n, count):
    poly = POLYOMINOES[name]
    places = poly.placements(n, n)
    assert len(places) == len(set(places)) == count
    if n <= 4:
        assert set(places) == brute_placements(poly, n)


def test_polyomino_game():
    g = gen_polyomino_game(3, "domino")
    assert len(g.ewins_black) == 12 and g.ewins_black == g.ewins_white
    with pytest.raises(GameSpecError):
        gen_polyomino_game(2, "snaky")
    with pytest.raises(GameSpecError):
        gen_polyomino_game(3, "pentomino_x")


def test_apply_opening():
    g = gen_lines_game(3, 3, 3)
    assert apply_opening(g) is g
    opened = apply_opening(g, ["b2"], ["a1"])
    assert opened.black_initials == {5} and opened.white_initials == {1}
    r = reduce_initials(opened)
    # lines through a1 are dead for Black, lines through b2 are dead for White
    assert len(r.game.ewins_black) == 8 - 3
    assert len(r.game.ewins_white) == 8 - 4
    with pytest.raises(GameSpecError):
        apply_opening(g, ["a1"], [1])


@pytest.mark.parametrize("game", [
    gen_lines_game(3, 3, 3), gen_lines_game(4, 4, 3, p=2, q=1, firstmoves=True),
    gen_lines_game(3, 3, 3, maker_breaker=True), gen_polyomino_game(4, "tetromino_l"),
    gen_qubic(), gen_hex(4), gen_hex(3, q=2),
], ids=["ttt", "lines-4x4", "ttt-mb", "tetromino", "qubic", "hex4", "hex3-q2"])
def test_generated_games_roundtrip(game):
    text = write_pg(game)
    assert parse_pg(text) == game
    assert write_pg(parse_pg(text)) == text
    for e in game.ewins_black + game.ewins_white:
        assert e and min(e) >= 1 and max(e) <= game.n
