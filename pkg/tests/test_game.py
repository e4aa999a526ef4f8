import warnings

import pytest
from hypothesis import assume, given, settings

from pgqbf.game import (
    BLACK,
    WHITE,
    GameSpecError,
    Outcome,
    PgFormatError,
    black_turn_ends,
    default_depth,
    make_game,
    merge_consecutive_turns,
    parse_pg,
    reduce_initials,
    write_pg,
)
from pgqbf.generators import apply_opening, gen_lines_game

from conftest import small_games


def names(game, edges):
    return {frozenset(game.vertices[v - 1] for v in e) for e in edges}


def test_appendix_document_fields(appendix_text):
    g = parse_pg(appendix_text)
    assert g.n == 9
    assert [label for label, _ in g.timeline] == ["t4", "t5", "t6", "t7", "t8", "t9"]
    assert [label for label, p in g.timeline if p is BLACK] == ["t5", "t7", "t9"]
    assert len(g.ewins_black) == 8 and len(g.ewins_white) == 8
    assert {g.vertices[v - 1] for v in g.black_initials} == {"b2", "c3"}
    assert {g.vertices[v - 1] for v in g.white_initials} == {"a1"}
    assert g.firstmoves is None and g.version == "1.0"


def test_appendix_reduction(appendix_text):
    r = reduce_initials(parse_pg(appendix_text))
    assert r.trivial_outcome is Outcome.NONE
    assert r.game.vertices == ("a2", "a3", "b1", "b3", "c1", "c2")
    assert names(r.game, r.game.ewins_black) == {
        frozenset(s.split()) for s in ("a2 c2", "a3 b3", "b1 b3", "c1 c2", "a3 c1")
    }
    assert names(r.game, r.game.ewins_white) == {frozenset(("b1", "c1")), frozenset(("a2", "a3"))}
    assert r.kept == (2, 3, 4, 6, 7, 8)


def test_write_parse_roundtrip(appendix_text):
    g = parse_pg(appendix_text)
    text = write_pg(g)
    assert parse_pg(text) == g
    assert write_pg(parse_pg(text)) == text


@pytest.mark.parametrize(
    "text, word",
    [
        ("#times\nt1\n#positions\na\n#bogus\n", None),
        ("#times\nt1\n#times\nt2\n#positions\na\n", "#times"),
        ("#times\nt1\n#positions\n", "#positions"),
        ("#times\n#positions\na\n", "#times"),
        ("#times\nt1\n#blackturns\nt2\n#positions\na\n", "#blackturns"),
        ("#times\nt1\n#positions\na\n#blackwins\na b\n", "#blackwins"),
        ("#times\nt1\n#positions\na-b\n", "#positions"),
        ("a\n#times\nt1\n", None),
        ("#times\nt1\n#positions\na\n#firstmoves\n", "#firstmoves"),
    ],
)
def test_parse_errors(text, word):
    with pytest.raises(PgFormatError) as info:
        parse_pg(text)
    assert info.value.code_word == word


def test_parse_error_names_line():
    with pytest.raises(PgFormatError) as info:
        parse_pg("#times\nt1\n#positions\na b\n#blackwins\na c\n")
    assert info.value.line == 6
    assert "line 6" in str(info.value) and "#blackwins" in str(info.value)


def test_overlapping_initials_rejected():
    with pytest.raises(GameSpecError):
        parse_pg("#times\nt1\n#positions\na b\n#blackinitials\na\n#whiteinitials\na\n")


def test_duplicate_edge_warns_and_dedupes():
    with pytest.warns(UserWarning, match="duplicate"):
        g = parse_pg("#times\nt1\n#blackturns\nt1\n#positions\na b\n#blackwins\na b\nb a\n")
    assert len(g.ewins_black) == 1


def test_other_version_warns():
    with pytest.warns(UserWarning, match="version"):
        g = parse_pg("#version\n2.0\n#times\nt1\n#positions\na\n")
    assert g.version == "2.0"


def test_default_depth():
    assert default_depth(9).black_turns == 5
    assert default_depth(9).timeline == tuple([BLACK, WHITE] * 4 + [BLACK])
    # Connect6 style: one opening stone then pairs
    plan = default_depth(7, p=2, q=1)
    assert plan.timeline == (BLACK, WHITE, WHITE, BLACK, BLACK, WHITE, WHITE)
    assert plan.black_turns == 3  # 1 + 2*2*2 >= 7
    with pytest.raises(ValueError):
        default_depth(0)


def test_merge_turns_and_black_ends():
    g = gen_lines_game(3, 3, 3, p=2, q=1)
    turns = merge_consecutive_turns(g)
    assert [(t.player, t.count) for t in turns] == [(BLACK, 1), (WHITE, 2), (BLACK, 2), (WHITE, 2), (BLACK, 2)]
    assert black_turn_ends(g) == [1, 5, 9]


def test_reduce_identity_and_trivial():
    g = gen_lines_game(3, 3, 3)
    assert reduce_initials(g).game is g
    won = apply_opening(g, ["a1", "a2", "a3"], ["b1"])
    assert reduce_initials(won).trivial_outcome is Outcome.BLACK_ALREADY_WON
    lost = apply_opening(g, ["b1"], ["a1", "b2", "c3"])
    assert reduce_initials(lost).trivial_outcome is Outcome.WHITE_ALREADY_WON


def test_reduce_full_board_is_empty_game():
    g = make_game(["a", "b"], "BW", [{1, 2}], [{1, 2}])
    r = reduce_initials(apply_opening(g, [1], [2]))
    assert r.trivial_outcome is Outcome.NONE
    assert r.game.n == 0 and r.game.ewins_black == ()


def test_reduce_remaps_firstmoves():
    g = gen_lines_game(3, 3, 3, firstmoves=[1, 2, 5])
    r = reduce_initials(apply_opening(g, [], [1]))
    assert {r.game.vertices[v - 1] for v in r.game.firstmoves} == {"a2", "b2"}
    with pytest.raises(GameSpecError):
        reduce_initials(apply_opening(gen_lines_game(3, 3, 3, firstmoves=[1]), [], [1]))


@settings(max_examples=150, deadline=None)
@given(small_games())
def test_pg_roundtrip_random(game):
    assume(game.timeline)  # the format has no way to write an empty #times
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        text = write_pg(game)
        assert parse_pg(text) == game
        assert write_pg(parse_pg(text)) == text
