"""Command line interface.

Exit status: 0 on success, 2 for input or configuration errors, 3 when a
solver or search budget ran out without a verdict.  ``check`` returns 1 when
game search and formula evaluation disagree.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

from . import __version__
from .cor import EncodeOptions, Variant
from .game import GameSpecError, parse_pg, write_pg
from .generators import POLYOMINOES, gen_hex, gen_lines_game, gen_polyomino_game, gen_qubic
from .harness import RunConfig, deepen, encode, run_external, size_report, solve_formula, write_report
from .oracle import Agreement, Verdict, check_equisat, solve_game, solve_qbf
from .qbf import FormulaError, parse_qdimacs, write_qdimacs

log = logging.getLogger("pgqbf")

EXIT_OK, EXIT_INPUT, EXIT_LIMIT = 0, 2, 3


class InputError(Exception):
    pass


def _read_game(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    try:
        return parse_pg(text)
    except GameSpecError as exc:
        raise InputError(f"{path}: {exc}") from None


def _options(args) -> EncodeOptions:
    return EncodeOptions(
        variant=Variant(getattr(args, "encoding", "cor")),
        depth_override=getattr(args, "depth", None),
        fold_t0=not getattr(args, "no_fold_t0", False),
        enc2_improvements=getattr(args, "enc2_improvements", False),
        emit_comments=getattr(args, "comments", False),
        use_firstmoves=getattr(args, "firstmoves", "auto") != "off",
    )


def _emit(text: str, out) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _print(args, data: dict, text: str) -> None:
    if getattr(args, "json", False):
        print(json.dumps(data, indent=2, default=str))
    else:
        print(text)


def _verdict_exit(v: Verdict) -> int:
    return EXIT_LIMIT if v is Verdict.UNKNOWN else EXIT_OK


# ---------------------------------------------------------------------------
# commands

def cmd_gen(args) -> int:
    mb = args.maker_breaker
    first = True if args.firstmoves == "auto" else None
    if args.family == "lines":
        game = gen_lines_game(args.rows, args.cols or args.rows, args.k, args.p, args.q, mb, first)
    elif args.family == "poly":
        game = gen_polyomino_game(args.rows, args.shape, args.p, args.q, first)
    elif args.family == "qubic":
        game = gen_qubic()
    else:
        game = gen_hex(args.rows, p=args.p, q=args.q)
    _emit(write_pg(game), args.output)
    return EXIT_OK


def cmd_encode(args) -> int:
    game = _read_game(args.game)
    opts = _options(args)
    if args.maker_breaker and game.ewins_white:
        raise InputError("--maker-breaker needs a game without #whitewins")
    f = encode(game, opts)
    _emit(write_qdimacs(f, comments=opts.emit_comments), args.output)
    data = size_report(game, f, opts)
    report = args.report
    if report is None and args.output not in (None, "-"):
        report = str(args.output) + ".stats"
    if report:
        write_report(report, data, as_json=args.json)
    return EXIT_OK


def cmd_stats(args) -> int:
    game = _read_game(args.game)
    opts = _options(args)
    data = size_report(game, encode(game, opts), opts)
    _print(args, data, "\n".join(f"{k}: {v}" for k, v in data.items()))
    return EXIT_OK


def cmd_oracle(args) -> int:
    game = _read_game(args.game)
    if args.firstmoves == "off":
        game = replace(game, firstmoves=None)
    r = solve_game(game, depth_limit=args.depth, optimal_depth=args.optimal, time_limit=args.timeout)
    data = {"verdict": r.verdict.value, "optimal_depth": r.optimal_depth, "nodes": r.nodes,
            "seconds": round(r.seconds, 3), "reason": r.reason}
    text = r.verdict.value + (f" (optimal depth {r.optimal_depth})" if r.optimal_depth is not None else "")
    _print(args, data, text)
    return _verdict_exit(r.verdict)


def cmd_qsolve(args) -> int:
    try:
        f = parse_qdimacs(Path(args.formula).read_text())
    except OSError as exc:
        raise InputError(f"{args.formula}: {exc.strerror}") from None
    except FormulaError as exc:
        raise InputError(f"{args.formula}: {exc}") from None
    r = solve_qbf(f, time_limit=args.timeout)
    data = {"verdict": r.verdict.value, "nodes": r.nodes, "decisions": r.decisions,
            "seconds": round(r.seconds, 3), "reason": r.reason}
    _print(args, data, r.verdict.value)
    return _verdict_exit(r.verdict)


def _config(args) -> RunConfig:
    return RunConfig(command=args.solver, timeout=args.timeout, report=args.report, jobs=args.jobs)


def cmd_run(args) -> int:
    config = _config(args)
    if not config.command:
        raise InputError("no solver given (use --solver or set PGQBF_SOLVER)")
    path = args.input
    if path.endswith(".pg"):
        game = _read_game(path)
        r = solve_formula(encode(game, _options(args)), config)
    else:
        r = run_external(path, config)
    data = {"verdict": r.verdict.value, "seconds": round(r.seconds, 3), "reason": r.reason, **r.extra}
    _print(args, data, r.verdict.value + (f" ({r.reason})" if r.reason else ""))
    if args.report:
        write_report(args.report, data, as_json=args.json)
    return _verdict_exit(r.verdict)


def cmd_deepen(args) -> int:
    game = _read_game(args.game)
    rep = deepen(game, _options(args), _config(args), start=args.start)
    text = rep.table() + f"\nverdict: {rep.verdict.value}" + (f" at depth {rep.depth}" if rep.depth else "")
    _print(args, rep.as_dict(), text)
    if args.report:
        write_report(args.report, rep.as_dict(), as_json=True)
    return _verdict_exit(rep.verdict)


def cmd_check(args) -> int:
    from .suite import desk_suite

    if args.game:
        cases = [("input", _read_game(args.game), (args.depth,) if args.depth else (None,))]
    else:
        cases = [(c.name, c.game, c.depths) for c in desk_suite()]
    rows = []
    worst = Agreement.AGREE
    for name, game, depths in cases:
        for d in depths:
            opts = replace(_options(args), depth_override=d)
            rep = check_equisat(game, opts, enc2=args.enc2, time_limit=args.timeout)
            rows.append({"game": name, "depth": d if d is not None else game.depth, "status": rep.status.value,
                         "game_verdict": rep.game_verdict.value,
                         **{k: v.value for k, v in rep.formula_verdicts.items()}})
            if not args.json:
                print(f"{name:24s} d={rows[-1]['depth']:<3} {rep.summary()}", flush=True)
            if rep.status is Agreement.DISAGREE:
                worst = Agreement.DISAGREE
            elif rep.status is Agreement.INCONCLUSIVE and worst is Agreement.AGREE:
                worst = Agreement.INCONCLUSIVE
    if args.json:
        print(json.dumps({"status": worst.value, "rows": rows}, indent=2))
    if args.report:
        write_report(args.report, {"status": worst.value, "rows": rows}, as_json=True)
    if worst is Agreement.DISAGREE:
        return 1
    return EXIT_LIMIT if worst is Agreement.INCONCLUSIVE else EXIT_OK


# ---------------------------------------------------------------------------
# parser

def _encoding_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--encoding", choices=[v.value for v in Variant], default="cor")
    p.add_argument("--depth", type=int, default=None, help="keep only the first N time points")
    p.add_argument("--no-fold-t0", action="store_true", help="give the empty start board its own variables")
    p.add_argument("--enc2-improvements", action="store_true", help="add the optional pruning clauses")
    p.add_argument("--firstmoves", choices=["auto", "off"], default="auto",
                   help="honour #firstmoves (auto) or ignore it (off)")


def _solver_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--solver", default=None, help="external solver command, '{file}' marks the formula path")
    p.add_argument("--timeout", type=float, default=300.0)
    p.add_argument("--jobs", type=int, default=1, help="parallel depths for an external solver")
    p.add_argument("--report", default=None, help="write a report file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pgqbf", description="Positional games to QBF.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a .pg game")
    p.add_argument("family", choices=["lines", "poly", "qubic", "hex"])
    p.add_argument("--rows", "-n", type=int, default=3)
    p.add_argument("--cols", type=int, default=None)
    p.add_argument("-k", type=int, default=3, help="line length")
    p.add_argument("--shape", choices=sorted(POLYOMINOES), default="domino")
    p.add_argument("-p", type=int, default=1)
    p.add_argument("-q", type=int, default=1)
    p.add_argument("--maker-breaker", action="store_true")
    p.add_argument("--firstmoves", choices=["auto", "off"], default="off",
                   help="auto: restrict Black's opening to the upper-left triangle")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("encode", help="write the QDIMACS formula of a game")
    p.add_argument("game")
    _encoding_flags(p)
    p.add_argument("--maker-breaker", action="store_true", help="insist on the Maker-Breaker treatment")
    p.add_argument("--comments", action="store_true", help="annotate variables in the output")
    p.add_argument("--report", default=None, help="stats report path (default: OUTPUT.stats)")
    p.add_argument("--json", action="store_true", help="JSON stats report")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("stats", help="formula size statistics")
    p.add_argument("game")
    _encoding_flags(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("oracle", help="solve a game by exhaustive search")
    p.add_argument("game")
    p.add_argument("--depth", type=int, default=None)
    p.add_argument("--optimal", action="store_true", help="also find the shortest winning depth")
    p.add_argument("--firstmoves", choices=["auto", "off"], default="auto")
    p.add_argument("--timeout", type=float, default=300.0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("qsolve", help="evaluate a QDIMACS file with the internal solver")
    p.add_argument("formula")
    p.add_argument("--timeout", type=float, default=300.0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_qsolve)

    p = sub.add_parser("run", help="run an external solver on a .pg or QDIMACS file")
    p.add_argument("input")
    _encoding_flags(p)
    _solver_flags(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("deepen", help="iterative deepening over Black-turn depths")
    p.add_argument("game")
    _encoding_flags(p)
    _solver_flags(p)
    p.add_argument("--start", type=int, default=None, help="first depth to try")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_deepen)

    p = sub.add_parser("check", help="compare game search with formula evaluation")
    p.add_argument("game", nargs="?", default=None, help="a .pg file (default: the built-in suite)")
    _encoding_flags(p)
    p.add_argument("--enc2", action="store_true", help="also check the monotonic encoding")
    p.add_argument("--timeout", type=float, default=120.0)
    p.add_argument("--report", default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s %(name)s: %(message)s")
    logging.captureWarnings(True)
    try:
        return args.func(args)
    except (InputError, GameSpecError, FormulaError, ValueError, RuntimeError) as exc:
        print(f"pgqbf: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
