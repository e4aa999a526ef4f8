"""The fixed desk-scale game suite used by the equivalence checks."""

from __future__ import annotations

from dataclasses import dataclass

from .game import GameSpec, black_turn_ends
from .generators import gen_hex, gen_lines_game, gen_polyomino_game


@dataclass(frozen=True)
class SuiteCase:
    name: str
    game: GameSpec
    depths: tuple[int, ...]


def suite_depths(game: GameSpec) -> tuple[int, ...]:
    """Two or three depths ending on a Black turn: an early cut, a middle
    cut and the full game (a one-vertex board only has one)."""
    ends = black_turn_ends(game)
    early = ends[0] if len(ends) <= 2 else ends[1]
    picks = {early, ends[len(ends) // 2], ends[-1]}
    return tuple(sorted(picks))


def _games():
    yield "lines-2x2-k2", gen_lines_game(2, 2, 2)
    yield "lines-2x2-k2-mb", gen_lines_game(2, 2, 2, maker_breaker=True)
    yield "lines-2x3-k2", gen_lines_game(2, 3, 2)
    yield "lines-2x3-k3", gen_lines_game(2, 3, 3)
    yield "lines-3x3-k2", gen_lines_game(3, 3, 2)
    yield "lines-3x3-k3", gen_lines_game(3, 3, 3)
    yield "lines-3x3-k3-mb", gen_lines_game(3, 3, 3, maker_breaker=True)
    yield "lines-3x3-k3-first", gen_lines_game(3, 3, 3, firstmoves=True)
    yield "lines-3x3-k3-p1q2", gen_lines_game(3, 3, 3, p=1, q=2)
    yield "lines-3x3-k3-p2q1", gen_lines_game(3, 3, 3, p=2, q=1)
    yield "lines-3x3-k2-p2q1", gen_lines_game(3, 3, 2, p=2, q=1)
    yield "domino-2x2", gen_polyomino_game(2, "domino")
    yield "domino-3x3", gen_polyomino_game(3, "domino")
    yield "domino-3x3-p1q2", gen_polyomino_game(3, "domino", p=1, q=2)
    yield "tromino_i-3x3", gen_polyomino_game(3, "tromino_i")
    yield "tromino_l-2x2", gen_polyomino_game(2, "tromino_l")
    yield "tromino_l-3x3", gen_polyomino_game(3, "tromino_l")
    yield "tromino_l-3x3-p2q1", gen_polyomino_game(3, "tromino_l", p=2, q=1)
    yield "tromino_i-3x3-p1q2", gen_polyomino_game(3, "tromino_i", p=1, q=2)
    yield "hex-1", gen_hex(1)
    yield "hex-2", gen_hex(2)
    yield "hex-3", gen_hex(3)
    yield "hex-3-p1q2", gen_hex(3, q=2)


def desk_suite() -> list[SuiteCase]:
    return [SuiteCase(name, game, suite_depths(game)) for name, game in _games()]
