"""Positional game descriptions: the ``.pg`` format, initial-stone reduction
and turn merging.

Vertices are addressed by 1-based indices into ``GameSpec.vertices``; the
declaration order is the total vertex order used by every encoder.
"""

from __future__ import annotations

import enum
import re
import warnings
from dataclasses import dataclass, field, replace
from typing import Iterable, NamedTuple, Optional, Sequence


class Player(str, enum.Enum):
    BLACK = "B"
    WHITE = "W"

    @property
    def opponent(self) -> "Player":
        return Player.WHITE if self is Player.BLACK else Player.BLACK


BLACK = Player.BLACK
WHITE = Player.WHITE

CODE_WORDS = (
    "#version",
    "#times",
    "#blackturns",
    "#positions",
    "#blackwins",
    "#whitewins",
    "#blackinitials",
    "#whiteinitials",
    "#firstmoves",
)

_TOKEN = re.compile(r"^[A-Za-z0-9]+$")


class GameSpecError(ValueError):
    """A game description violates a structural invariant."""


class PgFormatError(GameSpecError):
    """Syntax or reference error in a ``.pg`` document."""

    def __init__(self, message: str, line: Optional[int] = None, code_word: Optional[str] = None):
        self.line = line
        self.code_word = code_word
        where = []
        if line is not None:
            where.append(f"line {line}")
        if code_word is not None:
            where.append(code_word)
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)


@dataclass(frozen=True)
class GameSpec:
    vertices: tuple[str, ...]
    timeline: tuple[tuple[str, Player], ...]
    ewins_black: tuple[frozenset[int], ...] = ()
    ewins_white: tuple[frozenset[int], ...] = ()
    black_initials: frozenset[int] = frozenset()
    white_initials: frozenset[int] = frozenset()
    firstmoves: Optional[frozenset[int]] = None
    version: str = "1.0"

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def depth(self) -> int:
        return len(self.timeline)

    @property
    def players(self) -> tuple[Player, ...]:
        return tuple(p for _, p in self.timeline)

    @property
    def maker_breaker(self) -> bool:
        return not self.ewins_white

    def index_of(self, name: str) -> int:
        try:
            return self.vertices.index(name) + 1
        except ValueError:
            raise GameSpecError(f"unknown vertex {name!r}") from None

    def names(self, indices: Iterable[int]) -> list[str]:
        return [self.vertices[i - 1] for i in sorted(indices)]

    def truncated(self, depth: int) -> "GameSpec":
        """Keep only the first ``depth`` time points."""
        if depth < 0 or depth > self.depth:
            raise GameSpecError(f"depth {depth} outside 0..{self.depth}")
        return replace(self, timeline=self.timeline[:depth])


def validate(spec: GameSpec) -> None:
    n = spec.n
    if n == 0:
        raise GameSpecError("game has no vertices")
    if len(set(spec.vertices)) != n:
        raise GameSpecError("duplicate vertex name")
    labels = [label for label, _ in spec.timeline]
    if len(set(labels)) != len(labels):
        raise GameSpecError("duplicate time label")
    for who, edges in (("black", spec.ewins_black), ("white", spec.ewins_white)):
        for e in edges:
            if not e:
                raise GameSpecError(f"empty {who} winning set")
            if min(e) < 1 or max(e) > n:
                raise GameSpecError(f"{who} winning set refers to a vertex outside 1..{n}")
    for s in (spec.black_initials, spec.white_initials):
        if s and (min(s) < 1 or max(s) > n):
            raise GameSpecError("initial stone outside the board")
    if spec.black_initials & spec.white_initials:
        raise GameSpecError("a vertex is an initial stone of both players")
    if spec.firstmoves is not None:
        if not spec.firstmoves:
            raise GameSpecError("#firstmoves must not be empty")
        if min(spec.firstmoves) < 1 or max(spec.firstmoves) > n:
            raise GameSpecError("first move outside the board")


def _dedupe_edges(edges: Iterable[frozenset[int]], warn: bool = True, who: str = "") -> tuple[frozenset[int], ...]:
    seen: set[frozenset[int]] = set()
    out = []
    for e in edges:
        if e in seen:
            if warn:
                warnings.warn(f"duplicate {who} winning set dropped", stacklevel=3)
            continue
        seen.add(e)
        out.append(e)
    return tuple(out)


def make_game(
    vertices: Sequence[str],
    players: Sequence[Player],
    black_wins: Iterable[Iterable[int]],
    white_wins: Iterable[Iterable[int]] = (),
    labels: Optional[Sequence[str]] = None,
    firstmoves: Optional[Iterable[int]] = None,
) -> GameSpec:
    """Convenience constructor used by the generators and tests."""
    players = [Player(p) for p in players]
    if labels is None:
        labels = [f"t{i + 1}" for i in range(len(players))]
    spec = GameSpec(
        vertices=tuple(vertices),
        timeline=tuple(zip(labels, players)),
        ewins_black=_dedupe_edges((frozenset(e) for e in black_wins), warn=False),
        ewins_white=_dedupe_edges((frozenset(e) for e in white_wins), warn=False),
        firstmoves=None if firstmoves is None else frozenset(firstmoves),
    )
    validate(spec)
    return spec


# ---------------------------------------------------------------------------
# .pg reader / writer

def parse_pg(text: str) -> GameSpec:
    sections: dict[str, list[tuple[int, list[str]]]] = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            word = line.split()[0]
            if word not in CODE_WORDS:
                raise PgFormatError(f"unknown code word {word!r}", lineno)
            if len(line.split()) > 1:
                raise PgFormatError("a code word must stand alone on its line", lineno, word)
            if word in sections:
                raise PgFormatError("code word given twice", lineno, word)
            sections[word] = []
            current = word
            continue
        if current is None:
            raise PgFormatError("tokens before the first code word", lineno)
        tokens = line.split()
        for tok in tokens:
            if current != "#version" and not _TOKEN.match(tok):
                raise PgFormatError(f"token {tok!r} is not alphanumeric", lineno, current)
        sections[current].append((lineno, tokens))

    def flat(word: str) -> list[tuple[int, str]]:
        return [(ln, tok) for ln, toks in sections.get(word, []) for tok in toks]

    version = "1.0"
    if "#version" in sections:
        toks = flat("#version")
        if len(toks) != 1:
            raise PgFormatError("expected exactly one version token", None, "#version")
        version = toks[0][1]
        if version != "1.0":
            warnings.warn(f"unsupported .pg version {version!r}; reading as 1.0", stacklevel=2)

    positions = flat("#positions")
    if not positions:
        raise PgFormatError("empty or missing #positions", None, "#positions")
    index: dict[str, int] = {}
    for ln, name in positions:
        if name in index:
            raise PgFormatError(f"duplicate vertex name {name!r}", ln, "#positions")
        index[name] = len(index) + 1

    times = flat("#times")
    if not times:
        raise PgFormatError("empty or missing #times", None, "#times")
    seen_times: set[str] = set()
    for ln, label in times:
        if label in seen_times:
            raise PgFormatError(f"duplicate time label {label!r}", ln, "#times")
        seen_times.add(label)
    black_times = set()
    for ln, label in flat("#blackturns"):
        if label not in seen_times:
            raise PgFormatError(f"time label {label!r} not declared under #times", ln, "#blackturns")
        black_times.add(label)
    timeline = tuple((label, BLACK if label in black_times else WHITE) for _, label in times)

    def vertex(ln: int, name: str, word: str) -> int:
        try:
            return index[name]
        except KeyError:
            raise PgFormatError(f"vertex {name!r} not declared under #positions", ln, word) from None

    def edges(word: str, who: str) -> tuple[frozenset[int], ...]:
        out = [frozenset(vertex(ln, tok, word) for tok in toks) for ln, toks in sections.get(word, [])]
        return _dedupe_edges(out, who=who)

    def vset(word: str) -> frozenset[int]:
        return frozenset(vertex(ln, tok, word) for ln, tok in flat(word))

    firstmoves = None
    if "#firstmoves" in sections:
        firstmoves = vset("#firstmoves")
        if not firstmoves:
            raise PgFormatError("#firstmoves must list at least one vertex", None, "#firstmoves")

    spec = GameSpec(
        vertices=tuple(index),
        timeline=timeline,
        ewins_black=edges("#blackwins", "black"),
        ewins_white=edges("#whitewins", "white"),
        black_initials=vset("#blackinitials"),
        white_initials=vset("#whiteinitials"),
        firstmoves=firstmoves,
        version=version,
    )
    try:
        validate(spec)
    except PgFormatError:
        raise
    except GameSpecError as exc:
        raise PgFormatError(str(exc)) from None
    return spec


def _wrap(tokens: Sequence[str], width: int = 16) -> list[str]:
    return [" ".join(tokens[i:i + width]) for i in range(0, len(tokens), width)]


def write_pg(spec: GameSpec) -> str:
    validate(spec)
    name = spec.vertices
    out = ["#version", spec.version, "#times"]
    out += _wrap([label for label, _ in spec.timeline])
    out.append("#blackturns")
    out += _wrap([label for label, p in spec.timeline if p is BLACK])
    out.append("#positions")
    out += _wrap(list(spec.vertices))
    out.append("#blackwins")
    out += [" ".join(name[v - 1] for v in sorted(e)) for e in spec.ewins_black]
    if spec.ewins_white:
        out.append("#whitewins")
        out += [" ".join(name[v - 1] for v in sorted(e)) for e in spec.ewins_white]
    for word, s in (("#blackinitials", spec.black_initials), ("#whiteinitials", spec.white_initials)):
        if s:
            out.append(word)
            out += _wrap(spec.names(s))
    if spec.firstmoves is not None:
        out.append("#firstmoves")
        out += _wrap(spec.names(spec.firstmoves))
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# transformations

class Outcome(str, enum.Enum):
    NONE = "none"
    BLACK_ALREADY_WON = "black_already_won"
    WHITE_ALREADY_WON = "white_already_won"


@dataclass(frozen=True)
class ReducedGame:
    game: GameSpec
    trivial_outcome: Outcome = Outcome.NONE
    # original 1-based index of every surviving vertex, in order
    kept: tuple[int, ...] = field(default=())


def reduce_initials(spec: GameSpec) -> ReducedGame:
    """Remove initial stones, rewriting both hypergraphs.

    A stone of player a is dropped from a's winning sets and kills every
    winning set of the opponent through it.  If some winning set becomes
    empty its owner has already won; Black is checked first.
    """
    validate(spec)
    black, white = spec.black_initials, spec.white_initials
    if not black and not white:
        return ReducedGame(spec, Outcome.NONE, tuple(range(1, spec.n + 1)))

    def rewrite(edges, own, other):
        out, emptied = [], False
        for e in edges:
            if e & other:
                continue
            rest = e - own
            if not rest:
                emptied = True
                continue
            out.append(rest)
        return out, emptied

    eb, black_won = rewrite(spec.ewins_black, black, white)
    ew, white_won = rewrite(spec.ewins_white, white, black)
    kept = tuple(v for v in range(1, spec.n + 1) if v not in black and v not in white)
    renum = {old: new for new, old in enumerate(kept, start=1)}
    first = None
    if spec.firstmoves is not None:
        first = frozenset(renum[v] for v in spec.firstmoves if v in renum)
        if not first and kept and not (black_won or white_won):
            raise GameSpecError("every vertex listed under #firstmoves is an initial stone")
    outcome = Outcome.NONE
    if black_won:
        outcome = Outcome.BLACK_ALREADY_WON
    elif white_won:
        outcome = Outcome.WHITE_ALREADY_WON
    # with no vertex left every black set was either emptied or killed, so an
    # empty board together with Outcome.NONE means E_B is empty as well
    game = GameSpec(
        vertices=tuple(spec.vertices[v - 1] for v in kept),
        timeline=spec.timeline,
        ewins_black=_dedupe_edges((frozenset(renum[v] for v in e) for e in eb), warn=False),
        ewins_white=_dedupe_edges((frozenset(renum[v] for v in e) for e in ew), warn=False),
        firstmoves=first,
        version=spec.version,
    )
    return ReducedGame(game, outcome, kept)


class Turn(NamedTuple):
    player: Player
    count: int
    times: tuple[int, ...]  # 0-based time point indices


def merge_consecutive_turns(spec: GameSpec) -> tuple[Turn, ...]:
    turns: list[Turn] = []
    for i, p in enumerate(spec.players):
        if turns and turns[-1].player is p:
            last = turns[-1]
            turns[-1] = Turn(p, last.count + 1, last.times + (i,))
        else:
            turns.append(Turn(p, 1, (i,)))
    return tuple(turns)


class DepthPlan(NamedTuple):
    black_turns: int
    timeline: tuple[Player, ...]

    @property
    def depth(self) -> int:
        return len(self.timeline)


def default_depth(n_vertices: int, p: int = 1, q: int = 1) -> DepthPlan:
    """Black-turn bound and full move timeline of a (p, q) game on N vertices.

    ``black_turns`` is the least T with q + 2(T-1)p >= N.  The timeline is q
    Black moves followed by alternating blocks of p White and p Black moves,
    cut off once N moves have been made.
    """
    if n_vertices < 1 or p < 1 or q < 1:
        raise ValueError("n_vertices, p and q must be positive")
    t = 1
    while q + 2 * (t - 1) * p < n_vertices:
        t += 1
    timeline = [BLACK] * min(q, n_vertices)
    player = WHITE
    while len(timeline) < n_vertices:
        timeline += [player] * min(p, n_vertices - len(timeline))
        player = player.opponent
    return DepthPlan(t, tuple(timeline))


def timeline_labels(players: Sequence[Player]) -> tuple[tuple[str, Player], ...]:
    return tuple((f"t{i + 1}", p) for i, p in enumerate(players))


def black_turn_ends(spec: GameSpec) -> list[int]:
    """Depths (number of time points) at which a Black turn is complete."""
    return [turn.times[-1] + 1 for turn in merge_consecutive_turns(spec) if turn.player is BLACK]
