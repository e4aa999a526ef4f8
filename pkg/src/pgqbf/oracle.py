"""Ground truth: an exhaustive positional-game solver and a small search-based
QBF evaluator, plus the equivalence check that ties them together through
the encoders."""

from __future__ import annotations

import enum
import random
import sys
import time
from dataclasses import dataclass, field
from typing import Optional

from .game import BLACK, WHITE, GameSpec, GameSpecError, black_turn_ends, validate
from .qbf import FORALL, QbfFormula


class Verdict(str, enum.Enum):
    TRUE = "TRUE"
    FALSE = "FALSE"
    UNKNOWN = "UNKNOWN"

    @classmethod
    def of(cls, value: bool) -> "Verdict":
        return cls.TRUE if value else cls.FALSE


@dataclass
class SolveResult:
    verdict: Verdict
    optimal_depth: Optional[int] = None
    nodes: int = 0
    decisions: int = 0
    seconds: float = 0.0
    reason: str = ""
    extra: dict = field(default_factory=dict)

    def __bool__(self):
        raise TypeError("use .verdict")


class _Budget(Exception):
    pass


# ---------------------------------------------------------------------------
# game solver

GAME_VERTEX_LIMIT = 16


def solve_game(
    game: GameSpec,
    depth_limit: Optional[int] = None,
    optimal_depth: bool = False,
    node_limit: int = 10**8,
    time_limit: float = 300.0,
    vertex_limit: int = GAME_VERTEX_LIMIT,
) -> SolveResult:
    """Does Black (player 1) have a winning strategy?

    Initial stones are placed before the first time point.  A move claims
    one vertex; a player who completes one of their winning sets wins at
    once, also in the middle of a multi-claim turn.  The game stops without
    a Black win when the timeline or the board is exhausted.
    """
    if game.n == 0:
        # reduction can leave an empty board behind; nobody can claim anything
        return SolveResult(Verdict.FALSE, None, 0)
    validate(game)
    if game.n > vertex_limit:
        return SolveResult(Verdict.UNKNOWN, reason=f"more than {vertex_limit} vertices")
    players = game.players
    if game.firstmoves is not None and players and players[0] is WHITE:
        raise GameSpecError("#firstmoves restricts Black's first move but White moves first")
    start = time.monotonic()
    if optimal_depth:
        total_nodes = 0
        depths = [d for d in black_turn_ends(game) if depth_limit is None or d <= depth_limit]
        for d in depths:
            r = solve_game(game, d, False, node_limit - total_nodes, time_limit - (time.monotonic() - start), vertex_limit)
            total_nodes += r.nodes
            if r.verdict is Verdict.UNKNOWN:
                return SolveResult(Verdict.UNKNOWN, None, total_nodes, seconds=time.monotonic() - start, reason=r.reason)
            if r.verdict is Verdict.TRUE:
                return SolveResult(Verdict.TRUE, d, total_nodes, seconds=time.monotonic() - start)
        return SolveResult(Verdict.FALSE, None, total_nodes, seconds=time.monotonic() - start)

    depth = game.depth if depth_limit is None else min(depth_limit, game.depth)
    n = game.n
    full = (1 << n) - 1
    bit = lambda v: 1 << (v - 1)
    edges = {BLACK: [], WHITE: []}
    for who, es in ((BLACK, game.ewins_black), (WHITE, game.ewins_white)):
        for e in es:
            m = 0
            for v in e:
                m |= bit(v)
            edges[who].append(m)
    # winning sets through each vertex
    through = {who: [[m for m in edges[who] if m >> v & 1] for v in range(n)] for who in edges}
    black0 = sum(bit(v) for v in game.black_initials)
    white0 = sum(bit(v) for v in game.white_initials)
    first_mask = full if game.firstmoves is None else sum(bit(v) for v in game.firstmoves)

    def completes(owned, who, v):
        return any(m & owned == m for m in through[who][v])

    if any(m & black0 == m for m in edges[BLACK]):
        return SolveResult(Verdict.TRUE, 0 if optimal_depth else None, 0)
    if any(m & white0 == m for m in edges[WHITE]):
        return SolveResult(Verdict.FALSE, None, 0)

    table: dict = {}
    counter = [0]
    deadline = start + time_limit

    def black_wins(black, white, i):
        if i >= depth:
            return False
        free = full & ~(black | white)
        if not free:
            return False
        key = (black, white, i)
        hit = table.get(key)
        if hit is not None:
            return hit
        counter[0] += 1
        if counter[0] > node_limit or (counter[0] & 1023 == 0 and time.monotonic() > deadline):
            raise _Budget
        who = players[i]
        if i == 0 and who is BLACK:
            free &= first_mask
        if who is BLACK:
            result = False
            while free:
                low = free & -free
                free ^= low
                v = low.bit_length() - 1
                nb = black | low
                if completes(nb, BLACK, v) or black_wins(nb, white, i + 1):
                    result = True
                    break
        else:
            result = True
            while free:
                low = free & -free
                free ^= low
                v = low.bit_length() - 1
                nw = white | low
                if completes(nw, WHITE, v) or not black_wins(black, nw, i + 1):
                    result = False
                    break
        table[key] = result
        return result

    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 4 * depth + 1000))
    try:
        value = black_wins(black0, white0, 0)
    except _Budget:
        return SolveResult(Verdict.UNKNOWN, nodes=counter[0], seconds=time.monotonic() - start, reason="budget exhausted")
    finally:
        sys.setrecursionlimit(limit)
    return SolveResult(Verdict.of(value), nodes=counter[0], seconds=time.monotonic() - start)


# ---------------------------------------------------------------------------
# QBF evaluator

class _Search:
    """QDPLL without learning.

    Unit propagation with universal reduction, pure literals for both
    quantifiers, and a table of solved residual formulas keyed by an
    incremental hash of the unsatisfied clauses and their falsified literals.
    Branching follows the prefix, positive phase first.
    """

    def __init__(self, f: QbfFormula, node_limit: int, time_limit: float, memo: bool = True):
        n = f.num_vars
        self.n = n
        self.clauses = [list(c) for c in f.clauses]
        level = [0] * (n + 1)
        universal = [False] * (n + 1)
        order = []
        for depth, (q, ids) in enumerate(f.merged_prefix()):
            for v in ids:
                level[v] = depth
                universal[v] = q is FORALL
                order.append(v)
        quantified = set(order)
        for v in range(1, n + 1):
            if v not in quantified:
                order.append(v)  # unused or free: innermost existential
                level[v] = 10**9
        self.level = level
        self.universal = universal
        self.order = order
        self.val = [0] * (n + 1)
        pos = [[] for _ in range(n + 1)]
        negs = [[] for _ in range(n + 1)]
        for ci, c in enumerate(self.clauses):
            for l in c:
                (pos if l > 0 else negs)[abs(l)].append(ci)
        self.pos, self.neg = pos, negs
        m = len(self.clauses)
        self.nsat = [0] * m
        self.nexist = [sum(1 for l in c if not universal[abs(l)]) for c in self.clauses]
        rng = random.Random(0x5EED)
        self.zc = [rng.getrandbits(96) for _ in range(m)]
        self.zl = [[rng.getrandbits(96) for _ in c] for c in self.clauses]
        self.slot = [{l: k for k, l in enumerate(c)} for c in self.clauses]
        self.cur = [0] * m
        self.hash = 0
        for ci in range(m):
            self.hash ^= self.zc[ci]
        self.unsat = m
        self.cnt_pos = [len(pos[v]) for v in range(n + 1)]
        self.cnt_neg = [len(negs[v]) for v in range(n + 1)]
        self.trail: list[int] = []
        self.pure_queue: list[int] = list(range(1, n + 1))
        self.memo: Optional[dict] = {} if memo else None
        self.nodes = 0
        self.decisions = 0
        self.node_limit = node_limit
        self.deadline = time.monotonic() + time_limit
        self.conflict = any(not c for c in self.clauses)

    # -- assignment -------------------------------------------------------
    def _satisfy(self, ci):
        self.unsat -= 1
        self.hash ^= self.zc[ci] ^ self.cur[ci]
        cp, cn, pq = self.cnt_pos, self.cnt_neg, self.pure_queue
        for l in self.clauses[ci]:
            if l > 0:
                cp[l] -= 1
                if cp[l] == 0:
                    pq.append(l)
            else:
                cn[-l] -= 1
                if cn[-l] == 0:
                    pq.append(-l)

    def _unsatisfy(self, ci):
        self.unsat += 1
        self.hash ^= self.zc[ci] ^ self.cur[ci]
        cp, cn = self.cnt_pos, self.cnt_neg
        for l in self.clauses[ci]:
            if l > 0:
                cp[l] += 1
            else:
                cn[-l] += 1

    def _unit_of(self, ci):
        """The forced existential literal of clause ``ci``, if any."""
        val, uni, level = self.val, self.universal, self.level
        e = 0
        for l in self.clauses[ci]:
            if not val[abs(l)] and not uni[abs(l)]:
                e = l
                break
        if not e:
            return 0
        le = level[abs(e)]
        for l in self.clauses[ci]:
            a = abs(l)
            if not val[a] and uni[a] and level[a] < le:
                return 0
        return e

    def assign(self, lit, queue) -> bool:
        """Set ``lit`` true; push forced literals.  False on conflict."""
        v = abs(lit)
        value = 1 if lit > 0 else -1
        self.val[v] = value
        self.trail.append(v)
        true_occ = self.pos[v] if value > 0 else self.neg[v]
        false_occ = self.neg[v] if value > 0 else self.pos[v]
        nsat = self.nsat
        for ci in true_occ:
            nsat[ci] += 1
            if nsat[ci] == 1:
                self._satisfy(ci)
        ok = True
        uni = self.universal[v]
        nexist, cur, zl, slot = self.nexist, self.cur, self.zl, self.slot
        flit = -lit
        for ci in false_occ:
            z = zl[ci][slot[ci][flit]]
            cur[ci] ^= z
            if nsat[ci]:
                if not uni:
                    nexist[ci] -= 1
                continue
            self.hash ^= z
            if not uni:
                nexist[ci] -= 1
            k = nexist[ci]
            if k == 0:
                ok = False
            elif k == 1 and ok:
                u = self._unit_of(ci)
                if u:
                    queue.append(u)
        return ok

    def undo(self, mark):
        val, trail = self.val, self.trail
        nsat, nexist, cur, zl, slot = self.nsat, self.nexist, self.cur, self.zl, self.slot
        while len(trail) > mark:
            v = trail.pop()
            value = val[v]
            lit = v if value > 0 else -v
            true_occ = self.pos[v] if value > 0 else self.neg[v]
            false_occ = self.neg[v] if value > 0 else self.pos[v]
            uni = self.universal[v]
            for ci in false_occ:
                z = zl[ci][slot[ci][-lit]]
                cur[ci] ^= z
                if not nsat[ci]:
                    self.hash ^= z
                if not uni:
                    nexist[ci] += 1
            for ci in true_occ:
                nsat[ci] -= 1
                if nsat[ci] == 0:
                    self._unsatisfy(ci)
            val[v] = 0

    def propagate(self, queue) -> bool:
        val = self.val
        while True:
            while queue:
                lit = queue.pop()
                cur = val[abs(lit)]
                if cur:
                    if (cur > 0) != (lit > 0):
                        return False
                    continue
                if not self.assign(lit, queue):
                    return False
            pq = self.pure_queue
            if not pq:
                return True
            while pq:
                v = pq.pop()
                if val[v]:
                    continue
                p, q = self.cnt_pos[v], self.cnt_neg[v]
                if p and q:
                    continue
                if self.universal[v]:
                    # the universal player falsifies the only phase that occurs
                    queue.append(-v if p else v)
                else:
                    queue.append(v if p else -v)
                break

    # -- search -----------------------------------------------------------
    def solve(self) -> bool:
        if self.conflict:
            return False
        if any(k == 0 for k in self.nexist):
            return False  # purely universal clause
        queue = [u for ci, k in enumerate(self.nexist) if k == 1 and (u := self._unit_of(ci))]
        if not self.propagate(queue):
            return False
        return self._search(0)

    def _search(self, pos) -> bool:
        self.nodes += 1
        if self.nodes > self.node_limit or (self.nodes & 255 == 0 and time.monotonic() > self.deadline):
            raise _Budget
        if self.unsat == 0:
            return True
        memo = self.memo
        key = self.hash
        if memo is not None:
            hit = memo.get(key)
            if hit is not None:
                return hit
        order, val = self.order, self.val
        while val[order[pos]]:
            pos += 1
        v = order[pos]
        uni = self.universal[v]
        result = uni
        for lit in (v, -v):
            self.decisions += 1
            mark = len(self.trail)
            queue = [lit]
            ok = self.propagate(queue)
            r = self._search(pos + 1) if ok else False
            self.pure_queue.clear()
            self.undo(mark)
            if uni and not r:
                result = False
                break
            if not uni and r:
                result = True
                break
        if memo is not None:
            memo[key] = result
        return result


def solve_qbf(f: QbfFormula, node_limit: int = 10**8, time_limit: float = 300.0, memo: bool = True) -> SolveResult:
    start = time.monotonic()
    if f.constant is not None:
        return SolveResult(Verdict.of(f.constant))
    search = _Search(f, node_limit, time_limit, memo)
    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 4 * f.num_vars + 1000))
    try:
        value = search.solve()
    except _Budget:
        return SolveResult(Verdict.UNKNOWN, nodes=search.nodes, decisions=search.decisions,
                           seconds=time.monotonic() - start, reason="budget exhausted")
    finally:
        sys.setrecursionlimit(limit)
    return SolveResult(Verdict.of(value), nodes=search.nodes, decisions=search.decisions,
                       seconds=time.monotonic() - start)


# ---------------------------------------------------------------------------
# equivalence through the encoders

class Agreement(str, enum.Enum):
    AGREE = "AGREE"
    DISAGREE = "DISAGREE"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass
class EquisatReport:
    status: Agreement
    game_verdict: Verdict
    formula_verdicts: dict
    counterexample: Optional[dict] = None

    def summary(self) -> str:
        parts = ", ".join(f"{k}={v.value}" for k, v in self.formula_verdicts.items())
        return f"{self.status.value}: game={self.game_verdict.value}, {parts}"


def check_equisat(game: GameSpec, opts=None, enc2: bool = False, node_limit: int = 10**7,
                  time_limit: float = 120.0) -> EquisatReport:
    """Solve ``game`` directly and through its formulas, and compare."""
    from .cor import EncodeOptions, encode_cor
    from .enc2 import encode_enc2
    from dataclasses import replace

    opts = opts or EncodeOptions()
    depth = game.depth if opts.depth_override is None else opts.depth_override
    g = solve_game(game, depth_limit=depth, node_limit=node_limit, time_limit=time_limit)
    formulas = {"cor": encode_cor(game, opts)}
    if enc2:
        formulas["enc2"] = encode_enc2(game, replace(opts, maker_breaker_auto=False))
        formulas["enc2+impr"] = encode_enc2(game, replace(opts, maker_breaker_auto=False, enc2_improvements=True))
        if not game.ewins_white:
            formulas["enc2-mb"] = encode_enc2(game, replace(opts, maker_breaker_auto=True))
    verdicts = {k: solve_qbf(f, node_limit, time_limit).verdict for k, f in formulas.items()}
    everything = [g.verdict, *verdicts.values()]
    if Verdict.UNKNOWN in everything:
        status = Agreement.INCONCLUSIVE
    elif len(set(everything)) == 1:
        status = Agreement.AGREE
    else:
        status = Agreement.DISAGREE
    bundle = None
    if status is Agreement.DISAGREE:
        bundle = {"game": game, "depth": depth, "formulas": formulas}
    return EquisatReport(status, g.verdict, verdicts, bundle)
