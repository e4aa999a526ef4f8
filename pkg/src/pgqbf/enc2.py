"""The monotonic encoding.

Play is grouped into rounds: Black claims up to ``p^B_t`` vertices, then
White claims up to ``p^W_t``.  White's claims are plain universal vertex
variables, so an assignment may break the rules; such assignments are
caught by ``excess`` (too many claims in a round) and ``stack`` (a claim on
an occupied vertex) witnesses feeding a ``cheat`` flag that lets Black win.
Only the final position is represented, which is sound because claiming a
vertex can never hurt the claimer.

Two clauses deviate from the textbook form on purpose:

* White's claims of round ``t`` count towards her final position only if
  the game is still running in round ``t + 1``.  Otherwise White could reply
  to a completed Black set and turn a Black win into a loss.
* Stack witnesses exist for round 0 as well, since White moves after
  Black's opening claims.

``strict_textbook_clauses=True`` restores the printed forms, which is only
useful for demonstrating why the changes are needed.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from math import comb
from typing import Optional, Sequence

from .cor import EncodeOptions, _trivial, prepare_game
from .game import BLACK, GameSpec, GameSpecError, Turn
from .qbf import EXISTS, FORALL, QbfFormula

log = logging.getLogger(__name__)


class TupleCapError(GameSpecError):
    """Raised when a tuple family would exceed the configured cap."""


@dataclass(frozen=True)
class Enc2TurnPlan:
    """Claim sizes per round; round ``t`` is Black's claim then White's.

    A size of 0 means the player does not move in that round (a timeline
    starting with White, or one ending on Black).
    """

    black: tuple[int, ...]
    white: tuple[int, ...]

    @property
    def rounds(self) -> int:
        return len(self.black)

    @classmethod
    def from_turns(cls, turns: Sequence[Turn]) -> "Enc2TurnPlan":
        black: list[int] = []
        white: list[int] = []
        for turn in turns:
            if turn.player is BLACK:
                black.append(turn.count)
                white.append(0)
            else:
                if not black or white[-1]:
                    black.append(0)
                    white.append(0)
                white[-1] = turn.count
        return cls(tuple(black), tuple(white))


# descriptors
def TIME(t):
    return ("TIME", t)


def MOVEB(t, v):
    return ("MOVEB", t, v)


def MOVEW(t, v):
    return ("MOVEW", t, v)


def FINALB(v):
    return ("FINALB", v)


def FINALW(v):
    return ("FINALW", v)


def WIN(e):
    return ("WIN", e)


WINFLAG = ("WINFLAG",)
LOSE = ("LOSE",)
CHEAT = ("CHEAT",)


def EXCESS(t, tup):
    return ("EXCESS", t, tup)


def STACK(t, v):
    return ("STACK", t, v)


def BOARDB(t, v):
    return ("BOARD", BLACK, v, t)


def SELECT(*key):
    return ("SELECT",) + key


def ordered_tuples(n: int, size: int, cap: int):
    """All increasing ``size``-tuples of 1..n, guarded by ``cap``."""
    if size > n:
        return []
    count = comb(n, size)
    if count > cap:
        raise TupleCapError(f"C({n},{size}) = {count} tuples exceed the cap of {cap}")
    return list(itertools.combinations(range(1, n + 1), size))


def _stack_rounds(plan: Enc2TurnPlan, strict: bool):
    first = 1 if strict else 0
    return [t for t in range(first, plan.rounds) if plan.white[t]]


def build_enc2_prefix(game: GameSpec, plan: Enc2TurnPlan, f: QbfFormula, opts: EncodeOptions, strict: bool = False):
    n = game.n
    V = range(1, n + 1)
    stack_rounds = set(_stack_rounds(plan, strict))
    for t in range(plan.rounds):
        f.block(EXISTS, [TIME(t)])
        if plan.black[t]:
            f.block(EXISTS, [MOVEB(t, v) for v in V])
        if plan.white[t]:
            f.block(FORALL, [MOVEW(t, v) for v in V])
            f.block(EXISTS, [EXCESS(t, tup) for tup in ordered_tuples(n, plan.white[t] + 1, opts.tuple_cap)])
        if t in stack_rounds:
            f.block(EXISTS, [STACK(t, v) for v in V])
    f.block(EXISTS, [LOSE, WINFLAG, CHEAT] + [FINALB(v) for v in V] + [FINALW(v) for v in V]
            + [WIN(e) for e in range(1, len(game.ewins_black) + 1)])


def emit_enc2_core(game: GameSpec, plan: Enc2TurnPlan, f: QbfFormula, strict: bool = False) -> None:
    L = f.lit
    V = range(1, game.n + 1)
    T = plan.rounds
    for t in range(1, T):
        f.add_clause([L(TIME(t), False), L(TIME(t - 1))])
    for t in range(T):
        if plan.black[t]:
            for v in V:
                f.add_clause([L(TIME(t)), L(MOVEB(t, v), False)])
    for v in V:
        f.add_clause([L(FINALB(v), False)] + [L(MOVEB(t, v)) for t in range(T) if plan.black[t]])
    for t in range(T):
        if not plan.white[t]:
            continue
        if strict:
            gate = L(TIME(t), False)
        elif t + 1 < T:
            gate = L(TIME(t + 1), False)
        else:
            continue  # the game never runs past the last round
        for v in V:
            f.add_clause([L(FINALW(v)), gate, L(MOVEW(t, v), False)])
    f.add_clause([L(CHEAT), L(WINFLAG)])
    f.add_clause([L(CHEAT), L(LOSE, False)])
    edges = game.ewins_black
    f.add_clause([L(WINFLAG, False)] + [L(WIN(e)) for e in range(1, len(edges) + 1)])
    for e, edge in enumerate(edges, start=1):
        for v in sorted(edge):
            f.add_clause([L(WIN(e), False), L(FINALB(v))])
    for edge in game.ewins_white:
        f.add_clause([L(LOSE)] + [L(FINALW(v), False) for v in sorted(edge)])


def emit_enc2_legality(game: GameSpec, plan: Enc2TurnPlan, f: QbfFormula, opts: EncodeOptions,
                       strict: bool = False) -> None:
    L = f.lit
    n = game.n
    V = range(1, n + 1)
    T = plan.rounds
    for t in range(T):
        if plan.black[t]:
            for tup in ordered_tuples(n, plan.black[t] + 1, opts.tuple_cap):
                f.add_clause([L(MOVEB(t, v), False) for v in tup])
    for t in range(T):
        if not plan.black[t]:
            continue
        for t2 in range(t):
            if plan.white[t2]:
                for v in V:
                    f.add_clause([L(MOVEB(t, v), False), L(MOVEW(t2, v), False)])
    witnesses = []
    for t in range(T):
        if not plan.white[t]:
            continue
        for tup in ordered_tuples(n, plan.white[t] + 1, opts.tuple_cap):
            for v in tup:
                f.add_clause([L(EXCESS(t, tup), False), L(MOVEW(t, v))])
            witnesses.append(L(EXCESS(t, tup)))
    for t in _stack_rounds(plan, strict):
        for v in V:
            f.add_clause([L(STACK(t, v), False), L(MOVEW(t, v))])
            support = [L(MOVEB(t2, v)) for t2 in range(t + 1) if plan.black[t2]]
            if opts.enc2_improvements:
                support += [L(MOVEW(t2, v)) for t2 in range(t) if plan.white[t2]]
            f.add_clause([L(STACK(t, v), False)] + support)
            witnesses.append(L(STACK(t, v)))
    f.add_clause([L(CHEAT, False)] + witnesses)


def emit_enc2_improvements(game: GameSpec, plan: Enc2TurnPlan, f: QbfFormula) -> None:
    """Black never claims a vertex twice.  (White's counterpart lives in the
    stack support clause, see ``emit_enc2_legality``.)"""
    L = f.lit
    V = range(1, game.n + 1)
    for t in range(plan.rounds):
        for t2 in range(t):
            if plan.black[t] and plan.black[t2]:
                for v in V:
                    f.add_clause([L(MOVEB(t, v), False), L(MOVEB(t2, v), False)])


def _emit_firstmoves(game: GameSpec, plan: Enc2TurnPlan, f: QbfFormula, var) -> None:
    first = game.firstmoves
    if first is None or not plan.rounds:
        return
    if not plan.black[0]:
        raise GameSpecError("#firstmoves restricts Black's first move but White moves first")
    if plan.black[0] == 1:
        for v in range(1, game.n + 1):
            if v not in first:
                f.add_clause([f.lit(var(0, v), False)])
    else:
        f.add_clause([f.lit(var(0, v)) for v in sorted(first)])


def encode_enc2_mb(game: GameSpec, plan: Enc2TurnPlan, opts: EncodeOptions = EncodeOptions()) -> QbfFormula:
    """Maker-Breaker variant: Black's position is a monotone board, White's
    claims only block vertices Black does not own yet."""
    if game.ewins_white:
        raise GameSpecError("the Maker-Breaker encoding needs an empty White edge set")
    n = game.n
    V = range(1, n + 1)
    T = plan.rounds
    f = QbfFormula()
    f.notes.append(f"monotonic Maker-Breaker encoding: {n} vertices, {T} rounds")
    if T == 0:
        return QbfFormula.constant_formula(False, "no rounds")
    L = f.lit
    excess_tuples = {}
    for t in range(T):
        f.block(EXISTS, [BOARDB(t, v) for v in V])
        if plan.white[t]:
            f.block(FORALL, [MOVEW(t, v) for v in V])
            excess_tuples[t] = ordered_tuples(n, plan.white[t] + 1, opts.tuple_cap)
    edges = game.ewins_black
    selectors = [SELECT("EDGE", e) for e in range(1, len(edges) + 1)]
    selectors += [SELECT("EXCESS", t, tup) for t, tups in excess_tuples.items() for tup in tups]
    selectors += [SELECT("STACK", t, v) for t in range(T) if plan.white[t] for v in V]
    f.block(EXISTS, selectors)

    last = T - 1
    for t in range(1, T):
        for v in V:
            f.add_clause([L(BOARDB(t - 1, v), False), L(BOARDB(t, v))])
    for t in range(T):
        prev = (lambda v: False) if t == 0 else (lambda v, t=t: L(BOARDB(t - 1, v)))
        for tup in ordered_tuples(n, plan.black[t] + 1, opts.tuple_cap):
            f.add_clause([x for v in tup for x in (L(BOARDB(t, v), False), prev(v))])
    for t in range(T):
        if plan.white[t]:
            for v in V:
                f.add_clause([L(BOARDB(t, v)), L(MOVEW(t, v), False), L(BOARDB(last, v), False)])
    _emit_firstmoves(game, plan, f, lambda t, v: BOARDB(t, v))

    for e, edge in enumerate(edges, start=1):
        for v in sorted(edge):
            f.add_clause([L(SELECT("EDGE", e), False), L(BOARDB(last, v))])
    for t, tups in excess_tuples.items():
        for tup in tups:
            for v in tup:
                f.add_clause([L(SELECT("EXCESS", t, tup), False), L(MOVEW(t, v))])
    for t in range(T):
        if plan.white[t]:
            for v in V:
                f.add_clause([L(SELECT("STACK", t, v), False), L(BOARDB(t, v))])
                f.add_clause([L(SELECT("STACK", t, v), False), L(MOVEW(t, v))])
    f.add_clause([L(s) for s in selectors])
    return f


def encode_enc2(game: GameSpec, opts: EncodeOptions = EncodeOptions(), strict_textbook_clauses: bool = False) -> QbfFormula:
    reduced, turns = prepare_game(game, opts)
    trivial = _trivial(reduced)
    if trivial is not None:
        return trivial
    g = reduced.game
    plan = Enc2TurnPlan.from_turns(turns)
    if not g.ewins_white and opts.maker_breaker_auto and not strict_textbook_clauses:
        return encode_enc2_mb(g, plan, opts)
    f = QbfFormula()
    f.notes.append(f"monotonic encoding: {g.n} vertices, {plan.rounds} rounds")
    if strict_textbook_clauses:
        f.notes.append("printed clause forms (unsound, for comparison only)")
    build_enc2_prefix(g, plan, f, opts, strict_textbook_clauses)
    emit_enc2_core(g, plan, f, strict_textbook_clauses)
    emit_enc2_legality(g, plan, f, opts, strict_textbook_clauses)
    if opts.enc2_improvements:
        emit_enc2_improvements(g, plan, f)
    _emit_firstmoves(g, plan, f, MOVEB)
    return f


def primary_variables(game: GameSpec, plan: Optional[Enc2TurnPlan] = None) -> int:
    """Time, move, final and goal variables (no excess/stack witnesses)."""
    if plan is None:
        plan = Enc2TurnPlan.from_turns(prepare_game(game, EncodeOptions())[1])
    n = game.n
    moves = sum(n for b in plan.black if b) + sum(n for w in plan.white if w)
    return plan.rounds + moves + 2 * n + len(game.ewins_black) + 3
