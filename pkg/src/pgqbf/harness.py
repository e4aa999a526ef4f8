"""Solver plumbing: external QBF solvers via subprocess, the iterative
deepening driver, and report formatting."""

from __future__ import annotations

import json
import logging
import os
import shlex
import subprocess
import tempfile
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

from .cor import EncodeOptions, Variant, encode_cor
from .enc2 import encode_enc2
from .game import GameSpec, black_turn_ends
from .oracle import SolveResult, Verdict, solve_qbf
from .qbf import QbfFormula, stats, write_qdimacs

log = logging.getLogger(__name__)

SOLVER_ENV = "PGQBF_SOLVER"
DEFAULT_EXIT_CODES = {10: Verdict.TRUE, 20: Verdict.FALSE}


@dataclass
class RunConfig:
    """How to call an external solver.

    ``command`` is a shell-style template; ``{file}`` is replaced by the
    QDIMACS path (appended when the placeholder is missing).
    """

    command: Optional[str] = None
    timeout: float = 300.0
    exit_codes: dict = field(default_factory=lambda: dict(DEFAULT_EXIT_CODES))
    workdir: Optional[str] = None
    report: Optional[str] = None
    jobs: int = 1

    def __post_init__(self):
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")
        if self.command is None:
            self.command = os.environ.get(SOLVER_ENV) or None

    def argv(self, path: str) -> list[str]:
        parts = shlex.split(self.command)
        if any("{file}" in p for p in parts):
            return [p.replace("{file}", path) for p in parts]
        return parts + [path]


def run_external(qdimacs_path: str, config: RunConfig) -> SolveResult:
    argv = config.argv(str(qdimacs_path))
    start = time.monotonic()
    try:
        proc = subprocess.run(argv, cwd=config.workdir, capture_output=True, timeout=config.timeout)
    except subprocess.TimeoutExpired:
        return SolveResult(Verdict.UNKNOWN, seconds=time.monotonic() - start, reason="timeout",
                           extra={"timeout": True})
    except OSError as exc:
        raise RuntimeError(f"cannot start solver {argv[0]!r}: {exc}") from exc
    seconds = time.monotonic() - start
    verdict = config.exit_codes.get(proc.returncode, Verdict.UNKNOWN)
    reason = "" if verdict is not Verdict.UNKNOWN else f"unmapped exit code {proc.returncode}"
    return SolveResult(verdict, seconds=seconds, reason=reason, extra={"returncode": proc.returncode})


def encode(game: GameSpec, opts: EncodeOptions) -> QbfFormula:
    if opts.variant is Variant.ENC2:
        return encode_enc2(game, opts)
    return encode_cor(game, opts)


def solve_formula(f: QbfFormula, config: Optional[RunConfig] = None) -> SolveResult:
    """Internal evaluator unless ``config`` names an external solver."""
    if config is None or not config.command:
        timeout = config.timeout if config else 300.0
        return solve_qbf(f, time_limit=timeout)
    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "formula.qdimacs"
        path.write_text(write_qdimacs(f))
        return run_external(str(path), config)


@dataclass
class DepthRow:
    depth: int
    verdict: Verdict
    seconds: float
    reason: str = ""


@dataclass
class DeepenReport:
    rows: list[DepthRow]
    verdict: Verdict
    depth: Optional[int]

    def as_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "depth": self.depth,
            "rows": [{"depth": r.depth, "verdict": r.verdict.value, "seconds": round(r.seconds, 4),
                      **({"reason": r.reason} if r.reason else {})} for r in self.rows],
        }

    def table(self) -> str:
        lines = [f"{'d':>4}  {'not |= phi_d':>13}  {'|= phi_d':>10}"]
        for r in self.rows:
            cell = f"{r.seconds:.2f}"
            if r.verdict is Verdict.TRUE:
                lines.append(f"{r.depth:>4}  {'':>13}  {cell:>10}")
            elif r.verdict is Verdict.FALSE:
                lines.append(f"{r.depth:>4}  {cell:>13}  {'':>10}")
            else:
                lines.append(f"{r.depth:>4}  {'?':>13}  {'?':>10}  ({r.reason or 'unknown'})")
        return "\n".join(lines)


def deepen(game: GameSpec, opts: EncodeOptions = EncodeOptions(), config: Optional[RunConfig] = None,
           start: Optional[int] = None) -> DeepenReport:
    """Solve one formula per Black-turn depth, shallowest first, until one is true."""
    depths = [d for d in black_turn_ends(game) if start is None or d >= start]

    def one(d: int) -> DepthRow:
        f = encode(game, replace(opts, depth_override=d))
        r = solve_formula(f, config)
        log.info("depth %d: %s (%.2fs)", d, r.verdict.value, r.seconds)
        return DepthRow(d, r.verdict, r.seconds, r.reason)

    rows: list[DepthRow] = []
    jobs = config.jobs if config and config.command else 1
    if jobs > 1:
        # independent depths in parallel, joined in depth order so the early stop is preserved
        pool = ThreadPoolExecutor(max_workers=jobs)
        try:
            for fut in [pool.submit(one, d) for d in depths]:
                rows.append(fut.result())
                if rows[-1].verdict is Verdict.TRUE:
                    break
        finally:
            pool.shutdown(wait=False, cancel_futures=True)
    else:
        for d in depths:
            rows.append(one(d))
            if rows[-1].verdict is Verdict.TRUE:
                break
    if rows and rows[-1].verdict is Verdict.TRUE:
        return DeepenReport(rows, Verdict.TRUE, rows[-1].depth)
    if rows and all(r.verdict is Verdict.FALSE for r in rows):
        return DeepenReport(rows, Verdict.FALSE, None)
    return DeepenReport(rows, Verdict.UNKNOWN, None)


# ---------------------------------------------------------------------------
# reports

def size_report(game: GameSpec, f: QbfFormula, opts: EncodeOptions) -> dict:
    """Formula statistics next to the rough size estimates for the
    corrective encoding."""
    from .cor import counter_registers, prepare_game

    s = stats(f)
    out = {"encoding": opts.variant.value, **s.as_dict()}
    if f.constant is not None:
        out["constant"] = f.constant
        return out
    reduced, turns = prepare_game(game, opts)
    g = reduced.game
    n, depth = g.n, g.depth
    e_b, e_w = len(g.ewins_black), len(g.ewins_white)
    out.update(vertices=n, depth=depth, black_sets=e_b, white_sets=e_w)
    if opts.variant is Variant.COR:
        overhead = sum(n if t.count == 1 else len(counter_registers(n, t.count)) for t in turns)
        out["estimate_clauses"] = 20 * n * n + n * e_b + e_w
        out["estimate_exists"] = 4 * depth * n + e_b + overhead
    return out


def format_report(data: dict) -> str:
    lines = []
    for k, v in data.items():
        if isinstance(v, dict):
            v = " ".join(f"{a}:{b}" for a, b in v.items())
        lines.append(f"{k}: {v}")
    return "\n".join(lines) + "\n"


def write_report(path: str, data: dict, as_json: bool = False) -> None:
    text = json.dumps(data, indent=2, default=str) + "\n" if as_json else format_report(data)
    Path(path).write_text(text)
