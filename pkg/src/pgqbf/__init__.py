"""Compile positional games (Tic-Tac-Toe, Hex, Gomoku, Harary's polyomino
games...) into prenex-CNF quantified Boolean formulas."""

from .cor import EncodeOptions, Variant, encode_cor
from .enc2 import encode_enc2, encode_enc2_mb
from .game import (
    BLACK,
    WHITE,
    GameSpec,
    GameSpecError,
    PgFormatError,
    Player,
    make_game,
    parse_pg,
    reduce_initials,
    write_pg,
)
from .oracle import Verdict, check_equisat, solve_game, solve_qbf
from .qbf import QbfFormula, parse_qdimacs, stats, write_qdimacs

__version__ = "0.1.0"

__all__ = [
    "BLACK",
    "WHITE",
    "EncodeOptions",
    "GameSpec",
    "GameSpecError",
    "PgFormatError",
    "Player",
    "QbfFormula",
    "Variant",
    "Verdict",
    "check_equisat",
    "encode_cor",
    "encode_enc2",
    "encode_enc2_mb",
    "make_game",
    "parse_pg",
    "parse_qdimacs",
    "reduce_initials",
    "solve_game",
    "solve_qbf",
    "stats",
    "write_pg",
    "write_qdimacs",
]
