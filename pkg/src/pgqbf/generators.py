"""Instance families: k-in-a-row boards, Harary polyomino games, Qubic and Hex."""

from __future__ import annotations

import itertools
import logging
import string
from dataclasses import dataclass, replace
from math import ceil
from typing import Iterable

from .game import GameSpec, GameSpecError, default_depth, make_game, validate

log = logging.getLogger(__name__)

Cell = tuple[int, int]


def cell_name(row: int, col: int) -> str:
    """0-based (row, col) -> 'a1' style name: row letter(s), column number."""
    letters = ""
    r = row
    while True:
        letters = string.ascii_lowercase[r % 26] + letters
        r = r // 26 - 1
        if r < 0:
            break
    return f"{letters}{col + 1}"


def triangle_firstmoves(rows: int, cols: int) -> frozenset[int]:
    """Upper-left triangle {(i, j) : 1 <= i <= j <= ceil(n/2)} (1-based)."""
    half = ceil(min(rows, cols) / 2)
    return frozenset(i * cols + j + 1 for i in range(half) for j in range(i, half))


def _grid_game(rows, cols, edges, p, q, maker_breaker, firstmoves) -> GameSpec:
    n = rows * cols
    names = [cell_name(r, c) for r in range(rows) for c in range(cols)]
    plan = default_depth(n, p, q)
    first = None
    if firstmoves is True:
        first = triangle_firstmoves(rows, cols)
    elif firstmoves:
        first = frozenset(firstmoves)
    edges = sorted(set(edges), key=lambda e: sorted(e))
    return make_game(names, plan.timeline, edges, () if maker_breaker else edges, firstmoves=first)


def line_cells(rows: int, cols: int, k: int) -> list[frozenset[int]]:
    """All runs of exactly k cells in the four directions (1-based ids)."""
    out = []
    for r in range(rows):
        for c in range(cols):
            for dr, dc in ((0, 1), (1, 0), (1, 1), (1, -1)):
                cells = [(r + i * dr, c + i * dc) for i in range(k)]
                if all(0 <= x < rows and 0 <= y < cols for x, y in cells):
                    out.append(frozenset(x * cols + y + 1 for x, y in cells))
    return out


def gen_lines_game(rows: int, cols: int, k: int, p: int = 1, q: int = 1,
                   maker_breaker: bool = False, firstmoves=None) -> GameSpec:
    """k-in-a-row on a rows x cols board (tic-tac-toe, Gomoku, Connect6...).

    ``firstmoves=True`` restricts Black's opening to the upper-left triangle.
    """
    if rows < 1 or cols < 1:
        raise GameSpecError("board dimensions must be positive")
    if k < 1 or k > max(rows, cols):
        raise GameSpecError(f"k={k} does not fit a {rows}x{cols} board")
    edges = line_cells(rows, cols, k)
    if k == 1:
        edges = list(set(edges))
    return _grid_game(rows, cols, edges, p, q, maker_breaker, firstmoves)


@dataclass(frozen=True)
class Polyomino:
    cells: frozenset[Cell]

    def __post_init__(self):
        if not self.cells:
            raise GameSpecError("empty polyomino")
        object.__setattr__(self, "cells", self.normalize(self.cells))
        if not self._connected():
            raise GameSpecError("polyomino cells are not 4-connected")

    @staticmethod
    def normalize(cells: Iterable[Cell]) -> frozenset[Cell]:
        cells = list(cells)
        r0 = min(r for r, _ in cells)
        c0 = min(c for _, c in cells)
        return frozenset((r - r0, c - c0) for r, c in cells)

    def _connected(self) -> bool:
        todo = [next(iter(self.cells))]
        seen = set(todo)
        while todo:
            r, c = todo.pop()
            for nb in ((r + 1, c), (r - 1, c), (r, c + 1), (r, c - 1)):
                if nb in self.cells and nb not in seen:
                    seen.add(nb)
                    todo.append(nb)
        return len(seen) == len(self.cells)

    def orientations(self) -> list[frozenset[Cell]]:
        """Distinct rotations and reflections."""
        out = set()
        for flip in (False, True):
            cells = [(r, -c) if flip else (r, c) for r, c in self.cells]
            for _ in range(4):
                cells = [(c, -r) for r, c in cells]
                out.add(self.normalize(cells))
        return sorted(out, key=sorted)

    def placements(self, rows: int, cols: int) -> list[frozenset[Cell]]:
        out = set()
        for shape in self.orientations():
            h = max(r for r, _ in shape) + 1
            w = max(c for _, c in shape) + 1
            for dr in range(rows - h + 1):
                for dc in range(cols - w + 1):
                    out.add(frozenset((r + dr, c + dc) for r, c in shape))
        return sorted(out, key=sorted)


def _poly(*cells):
    return Polyomino(frozenset(cells))


POLYOMINOES = {
    "monomino": _poly((0, 0)),
    "domino": _poly((0, 0), (0, 1)),
    "tromino_i": _poly((0, 0), (0, 1), (0, 2)),
    "tromino_l": _poly((0, 0), (1, 0), (1, 1)),
    "tetromino_l": _poly((0, 0), (1, 0), (2, 0), (2, 1)),
    # four in a row with a step up at the end
    "snaky": _poly((1, 0), (1, 1), (1, 2), (1, 3), (0, 3), (0, 4)),
}


def gen_polyomino_game(n: int, poly, p: int = 1, q: int = 1, firstmoves=None) -> GameSpec:
    """Harary's generalised tic-tac-toe on an n x n board."""
    if isinstance(poly, str):
        try:
            poly = POLYOMINOES[poly]
        except KeyError:
            raise GameSpecError(f"unknown polyomino {poly!r}; known: {', '.join(POLYOMINOES)}") from None
    places = poly.placements(n, n)
    if not places:
        raise GameSpecError(f"the polyomino does not fit a {n}x{n} board")
    edges = [frozenset(r * n + c + 1 for r, c in cells) for cells in places]
    return _grid_game(n, n, edges, p, q, False, firstmoves)


def qubic_lines(size: int = 4) -> list[frozenset[int]]:
    """All sets of ``size`` collinear cells in a size^3 cube, found by brute force
    over start cells and direction vectors."""
    idx = lambda x, y, z: (x * size + y) * size + z + 1
    lines = set()
    directions = [d for d in itertools.product((-1, 0, 1), repeat=3) if any(d)]
    for x, y, z in itertools.product(range(size), repeat=3):
        for dx, dy, dz in directions:
            cells = [(x + i * dx, y + i * dy, z + i * dz) for i in range(size)]
            if all(0 <= a < size for c in cells for a in c):
                lines.add(frozenset(idx(*c) for c in cells))
    return sorted(lines, key=sorted)


def gen_qubic(size: int = 4) -> GameSpec:
    names = [f"c{x}{y}{z}" for x in range(size) for y in range(size) for z in range(size)]
    edges = qubic_lines(size)
    plan = default_depth(len(names))
    return make_game(names, plan.timeline, edges, edges)


HEX_CAP = 5


def hex_neighbours(n: int, r: int, c: int) -> list[Cell]:
    out = []
    for dr, dc in ((-1, 0), (1, 0), (0, -1), (0, 1), (-1, 1), (1, -1)):
        if 0 <= r + dr < n and 0 <= c + dc < n:
            out.append((r + dr, c + dc))
    return out


def hex_connects(n: int, cells: set) -> bool:
    """Do ``cells`` contain a chain from row 0 to row n-1?"""
    todo = [cell for cell in cells if cell[0] == 0]
    seen = set(todo)
    while todo:
        r, c = todo.pop()
        if r == n - 1:
            return True
        for nb in hex_neighbours(n, r, c):
            if nb in cells and nb not in seen:
                seen.add(nb)
                todo.append(nb)
    return False


def hex_minimal_paths(n: int) -> list[frozenset[Cell]]:
    """Minimal top-to-bottom connecting cell sets.

    Every minimal set is the vertex set of a simple path that touches the top
    row only at its first cell and the bottom row only at its last one, so we
    enumerate those paths and keep the sets from which no cell can be dropped.
    """
    found = set()

    def extend(path, on_path):
        r, c = path[-1]
        if r == n - 1:
            found.add(frozenset(path))
            return
        for nb in hex_neighbours(n, r, c):
            if nb in on_path or nb[0] == 0:
                continue
            # a cell adjacent to an earlier path cell (other than the last) makes a shortcut
            if any(p in on_path and p != (r, c) for p in hex_neighbours(n, *nb)):
                continue
            path.append(nb)
            on_path.add(nb)
            extend(path, on_path)
            on_path.discard(nb)
            path.pop()

    for c in range(n):
        extend([(0, c)], {(0, c)})
    minimal = [s for s in found if all(not hex_connects(n, set(s - {x})) for x in s)]
    return sorted(minimal, key=sorted)


def gen_hex(n: int, cap: int = HEX_CAP, p: int = 1, q: int = 1) -> GameSpec:
    """Hex as Maker-Breaker: Black joins the top and bottom rows."""
    if n < 1:
        raise GameSpecError("hex board size must be positive")
    if n > cap:
        raise GameSpecError(f"hex board {n} exceeds the cap {cap}; the hypergraph grows exponentially")
    names = [cell_name(r, c) for r in range(n) for c in range(n)]
    edges = [frozenset(r * n + c + 1 for r, c in s) for s in hex_minimal_paths(n)]
    plan = default_depth(n * n, p, q)
    return make_game(names, plan.timeline, edges, ())


def apply_opening(spec: GameSpec, black_stones: Iterable = (), white_stones: Iterable = ()) -> GameSpec:
    """Place initial stones, given as vertex ids or names."""

    def ids(stones):
        out = set()
        for s in stones:
            out.add(spec.index_of(s) if isinstance(s, str) else int(s))
        return frozenset(out)

    black, white = ids(black_stones), ids(white_stones)
    if black & white:
        raise GameSpecError("a vertex cannot hold both a black and a white stone")
    if not black and not white:
        return spec
    out = replace(spec, black_initials=spec.black_initials | black, white_initials=spec.white_initials | white)
    validate(out)
    return out
