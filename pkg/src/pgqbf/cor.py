"""The corrective encoding.

White's moves are read from ``ceil(log2 N)`` universal bits per individual
move.  A bit pattern that names an occupied or nonexistent vertex forces
nothing; the cardinality constraint then makes the existential player pick
some legal White move instead, so no universal assignment can falsify the
matrix by breaking the rules.

Consecutive time points of one player are merged into a single level whose
moves are constrained by an exactly-k sequential counter (k = 1 is the
ladder).  Level 0 is the empty board; by default it is folded into the
clauses instead of receiving variables.
"""

from __future__ import annotations

import enum
import logging
import warnings
from dataclasses import dataclass, replace
from typing import Optional, Sequence

from .game import (
    BLACK,
    WHITE,
    GameSpec,
    GameSpecError,
    Outcome,
    Turn,
    merge_consecutive_turns,
    reduce_initials,
)
from .qbf import EXISTS, FORALL, QbfFormula, neg

log = logging.getLogger(__name__)

PLAYERS = (BLACK, WHITE)


class Variant(str, enum.Enum):
    COR = "cor"
    ENC2 = "enc2"


@dataclass(frozen=True)
class EncodeOptions:
    variant: Variant = Variant.COR
    depth_override: Optional[int] = None
    fold_t0: bool = True
    enc2_improvements: bool = False
    maker_breaker_auto: bool = True
    emit_comments: bool = False
    use_firstmoves: bool = True
    tuple_cap: int = 10**6


def log_bits(n: int) -> int:
    """Number of bits needed to index ``n`` vertices (0 for n <= 1)."""
    return max(n - 1, 0).bit_length()


def bit_sets(b: int, bits: int) -> tuple[list[int], list[int]]:
    """Positions of the 1 bits and 0 bits of ``b`` over ``bits`` bits."""
    ones = [i for i in range(bits) if b >> i & 1]
    zeros = [i for i in range(bits) if not b >> i & 1]
    return ones, zeros


def prepare_game(game: GameSpec, opts: EncodeOptions):
    """Reduce initial stones and cut the timeline.

    Returns ``(reduced, turns)``; ``reduced.trivial_outcome`` tells callers
    whether encoding is needed at all.
    """
    depth = game.depth if opts.depth_override is None else opts.depth_override
    if depth > game.depth or depth < 0:
        raise GameSpecError(f"depth override {depth} outside 0..{game.depth}")
    reduced = reduce_initials(game)
    g = reduced.game
    if depth < game.depth and g.players[depth - 1:depth] == (WHITE,):
        warnings.warn(f"depth {depth} ends on a White move", stacklevel=3)
    # every move claims a fresh vertex, so only the first N time points can be played
    if depth > g.n:
        log.info("timeline cut from %d to %d time points (board size)", depth, g.n)
        depth = g.n
    g = g.truncated(depth)
    if not opts.use_firstmoves:
        g = replace(g, firstmoves=None)
    if g.firstmoves is not None and g.timeline and g.timeline[0][1] is WHITE:
        raise GameSpecError("#firstmoves restricts Black's first move but White moves first")
    reduced = replace(reduced, game=g)
    return reduced, merge_consecutive_turns(g)


# ---------------------------------------------------------------------------
# descriptors

def TIME(t):
    return ("TIME", t)


def BOARD(a, v, t):
    return ("BOARD", a, v, t)


def OCC(v, t):
    return ("OCCUPIED", v, t)


def MOVE(v, t):
    return ("MOVE", v, t)


def MOVEL(i, t, j=0):
    return ("MOVEL", i, t, j)


def LADDER(i, t):
    return ("LADDER", i, t)


def COUNTER(i, j, t):
    return ("COUNTER", i, j, t)


def WIN(e):
    return ("WIN", e)


def counter_registers(n: int, k: int):
    """(i, j) pairs of a sequential counter over n inputs up to k."""
    return [(i, j) for i in range(1, n + 1) for j in range(1, min(i, k) + 1)]


def build_cor_prefix(game: GameSpec, turns: Sequence[Turn], f: QbfFormula, fold_t0: bool = True) -> None:
    n = game.n
    bits = log_bits(n)
    V = range(1, n + 1)
    if fold_t0:
        f.fix(TIME(0), True)
        for v in V:
            f.fix(OCC(v, 0), False)
            for a in PLAYERS:
                f.fix(BOARD(a, v, 0), False)
    else:
        f.block(EXISTS, [TIME(0)] + [BOARD(a, v, 0) for v in V for a in PLAYERS] + [OCC(v, 0) for v in V])
    for t, turn in enumerate(turns, start=1):
        f.block(EXISTS, [TIME(t)])
        if turn.player is WHITE:
            f.block(FORALL, [MOVEL(i, t, j) for j in range(turn.count) for i in range(bits)])
        f.block(EXISTS, [MOVE(v, t) for v in V])
        f.block(EXISTS, [BOARD(a, v, t) for v in V for a in PLAYERS])
        f.block(EXISTS, [OCC(v, t) for v in V])
        if turn.count == 1:
            f.block(EXISTS, [LADDER(i, t) for i in V])
        else:
            f.block(EXISTS, [COUNTER(i, j, t) for i, j in counter_registers(n, turn.count)])
    f.block(EXISTS, [WIN(e) for e in range(1, len(game.ewins_black) + 1)])


def emit_state_clauses(game: GameSpec, turns: Sequence[Turn], f: QbfFormula, fold_t0: bool = True) -> None:
    L = f.lit
    V = range(1, game.n + 1)
    if not fold_t0:
        for v in V:
            for a in PLAYERS:
                f.add_clause([L(BOARD(a, v, 0), False)])
        for v in V:
            f.add_clause([L(OCC(v, 0), False)])
    for t in range(1, len(turns) + 1):
        f.add_clause([L(TIME(t), False), L(TIME(t - 1))])
        for v in V:
            f.add_clause([L(BOARD(BLACK, v, t), False), L(BOARD(WHITE, v, t), False)])
        for a in PLAYERS:
            for v in V:
                f.add_clause([L(BOARD(a, v, t - 1), False), L(BOARD(a, v, t))])
        for a in PLAYERS:
            for v in V:
                f.add_clause([L(TIME(t)), L(BOARD(a, v, t - 1)), L(BOARD(a, v, t), False)])
        for a in PLAYERS:
            for v in V:
                f.add_clause([L(OCC(v, t)), L(BOARD(a, v, t), False)])
        for v in V:
            f.add_clause([L(OCC(v, t), False), L(BOARD(BLACK, v, t)), L(BOARD(WHITE, v, t))])


def emit_move_clauses(game: GameSpec, turns: Sequence[Turn], f: QbfFormula) -> None:
    L = f.lit
    V = range(1, game.n + 1)
    for t, turn in enumerate(turns, start=1):
        a = turn.player
        o = a.opponent
        for v in V:
            f.add_clause([L(TIME(t)), L(MOVE(v, t), False)])
        for v in V:
            f.add_clause([L(OCC(v, t - 1), False), L(MOVE(v, t), False)])
        for v in V:
            f.add_clause([L(BOARD(a, v, t)), L(MOVE(v, t), False)])
        for v in V:
            f.add_clause([L(MOVE(v, t)), L(BOARD(a, v, t - 1)), L(BOARD(a, v, t), False)])
        for v in V:
            f.add_clause([L(BOARD(o, v, t - 1)), L(BOARD(o, v, t), False)])


def emit_white_choice_clauses(game: GameSpec, turns: Sequence[Turn], f: QbfFormula) -> None:
    L = f.lit
    n = game.n
    bits = log_bits(n)
    for t, turn in enumerate(turns, start=1):
        if turn.player is not WHITE:
            continue
        for j in range(turn.count):
            for v in range(1, n + 1):
                ones, zeros = bit_sets(v - 1, bits)
                f.add_clause(
                    [L(MOVEL(i, t, j), False) for i in ones]
                    + [L(MOVEL(i, t, j)) for i in zeros]
                    + [L(TIME(t), False), L(OCC(v, t - 1)), L(MOVE(v, t))]
                )


def emit_goal_clauses(game: GameSpec, turns: Sequence[Turn], f: QbfFormula) -> None:
    L = f.lit
    F = len(turns)
    edges = game.ewins_black
    f.add_clause([L(WIN(e)) for e in range(1, len(edges) + 1)])
    for e, edge in enumerate(edges, start=1):
        for v in sorted(edge):
            f.add_clause([L(WIN(e), False), L(BOARD(BLACK, v, F))])
    for e, edge in enumerate(edges, start=1):
        f.add_clause([L(WIN(e))] + [L(BOARD(BLACK, v, F), False) for v in sorted(edge)])
    for edge in game.ewins_white:
        f.add_clause([L(BOARD(WHITE, v, F), False) for v in sorted(edge)])


def emit_ladder(f: QbfFormula, xs: Sequence, regs: Sequence, gate) -> None:
    """Exactly-one over ``xs`` when ``gate`` holds, none otherwise is left
    to the caller.  ``regs[i]`` is the ladder literal after input i."""
    n = len(xs)
    for i in range(n - 1):
        f.add_clause([neg(regs[i]), regs[i + 1]])
    for i in range(n):
        f.add_clause([neg(xs[i]), regs[i]])
    for i in range(n - 1):
        f.add_clause([neg(xs[i + 1]), neg(regs[i])])
    f.add_clause([xs[0], neg(regs[0])])
    for i in range(n - 1):
        f.add_clause([xs[i + 1], regs[i], neg(regs[i + 1])])
    f.add_clause([neg(gate), regs[n - 1]])


def emit_sequential_counter(f: QbfFormula, xs: Sequence, k: int, reg, gate) -> None:
    """Exactly-k over ``xs`` when ``gate`` holds, at most k otherwise.

    ``reg(i, j)`` (1-based, j <= min(i, k)) means "at least j of the first i
    inputs are true"; registers are defined in both directions so the final
    register can be demanded.  For k = 1 the clauses are the ladder's.
    """
    n = len(xs)
    x = lambda i: xs[i - 1]
    for i in range(1, n):
        for j in range(1, min(i, k) + 1):
            f.add_clause([neg(reg(i, j)), reg(i + 1, j)])
    for i in range(1, n + 1):
        f.add_clause([neg(x(i)), reg(i, 1)])
    for i in range(2, n + 1):
        for j in range(2, min(i, k) + 1):
            f.add_clause([neg(x(i)), neg(reg(i - 1, j - 1)), reg(i, j)])
    for i in range(k + 1, n + 1):
        f.add_clause([neg(x(i)), neg(reg(i - 1, k))])
    f.add_clause([x(1), neg(reg(1, 1))])
    for i in range(2, n + 1):
        for j in range(1, min(i, k) + 1):
            if j <= i - 1:
                f.add_clause([x(i), reg(i - 1, j), neg(reg(i, j))])
            else:
                f.add_clause([x(i), neg(reg(i, j))])
            if j >= 2:
                if j <= i - 1:
                    f.add_clause([reg(i - 1, j), reg(i - 1, j - 1), neg(reg(i, j))])
                else:
                    f.add_clause([reg(i - 1, j - 1), neg(reg(i, j))])
    if k > n:
        f.add_clause([neg(gate)])
    else:
        f.add_clause([neg(gate), reg(n, k)])


def emit_cardinality_clauses(game: GameSpec, turns: Sequence[Turn], f: QbfFormula) -> None:
    L = f.lit
    n = game.n
    V = range(1, n + 1)
    for t, turn in enumerate(turns, start=1):
        xs = [L(MOVE(v, t)) for v in V]
        if turn.count == 1:
            emit_ladder(f, xs, [L(LADDER(i, t)) for i in V], L(TIME(t)))
        else:
            emit_sequential_counter(f, xs, turn.count, lambda i, j, t=t: L(COUNTER(i, j, t)), L(TIME(t)))
    first = game.firstmoves
    if first is not None and turns:
        if turns[0].player is not BLACK:
            raise GameSpecError("#firstmoves restricts Black's first move but White moves first")
        if turns[0].count == 1:
            for v in V:
                if v not in first:
                    f.add_clause([L(MOVE(v, 1), False)])
        else:
            # set semantics inside a merged turn: some stone of the turn is a first move
            f.add_clause([L(TIME(1), False)] + [L(MOVE(v, 1)) for v in sorted(first)])


def _trivial(reduced) -> Optional[QbfFormula]:
    g = reduced.game
    if reduced.trivial_outcome is Outcome.BLACK_ALREADY_WON:
        return QbfFormula.constant_formula(True, "black already won through initial stones")
    if reduced.trivial_outcome is Outcome.WHITE_ALREADY_WON:
        return QbfFormula.constant_formula(False, "white already won through initial stones")
    if not g.ewins_black:
        return QbfFormula.constant_formula(False, "black has no winning set")
    return None


def encode_cor(game: GameSpec, opts: EncodeOptions = EncodeOptions()) -> QbfFormula:
    reduced, turns = prepare_game(game, opts)
    trivial = _trivial(reduced)
    if trivial is not None:
        return trivial
    g = reduced.game
    f = QbfFormula()
    f.notes.append(f"corrective encoding: {g.n} vertices, {g.depth} time points, {len(turns)} levels")
    if any(turn.count > 1 for turn in turns):
        f.notes.append("merged turns use a sequential counter instead of the ladder")
    build_cor_prefix(g, turns, f, opts.fold_t0)
    emit_state_clauses(g, turns, f, opts.fold_t0)
    emit_move_clauses(g, turns, f)
    emit_white_choice_clauses(g, turns, f)
    emit_goal_clauses(g, turns, f)
    emit_cardinality_clauses(g, turns, f)
    return f


def white_moves(game: GameSpec, opts: EncodeOptions = EncodeOptions()) -> int:
    """Individual White moves that survive reduction and truncation."""
    reduced, turns = prepare_game(game, opts)
    return sum(t.count for t in turns if t.player is WHITE)
