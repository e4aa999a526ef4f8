import json
import sys

import pytest

from pgqbf.cli import main
from pgqbf.cor import EncodeOptions, Variant, encode_cor
from pgqbf.game import make_game, parse_pg, write_pg
from pgqbf.generators import gen_lines_game, gen_polyomino_game
from pgqbf.harness import RunConfig, deepen, encode, run_external, size_report, solve_formula
from pgqbf.oracle import Verdict
from pgqbf.qbf import parse_qdimacs, write_qdimacs

PY = sys.executable


def fake_solver(code: int) -> str:
    return f"{PY} -c 'import sys; sys.exit({code})'"


@pytest.fixture
def ttt_file(tmp_path):
    path = tmp_path / "ttt.pg"
    path.write_text(write_pg(gen_lines_game(3, 3, 3)))
    return path


@pytest.fixture
def domino_file(tmp_path):
    path = tmp_path / "domino.pg"
    path.write_text(write_pg(gen_polyomino_game(3, "domino")))
    return path


# -- external solver plumbing ----------------------------------------------

def test_exit_code_map(tmp_path):
    f = tmp_path / "x.qdimacs"
    f.write_text("p cnf 1 1\ne 1 0\n1 0\n")
    assert run_external(str(f), RunConfig(fake_solver(10))).verdict is Verdict.TRUE
    assert run_external(str(f), RunConfig(fake_solver(20))).verdict is Verdict.FALSE
    r = run_external(str(f), RunConfig(fake_solver(1)))
    assert r.verdict is Verdict.UNKNOWN and "unmapped" in r.reason


def test_timeout(tmp_path):
    f = tmp_path / "x.qdimacs"
    f.write_text("p cnf 1 1\ne 1 0\n1 0\n")
    r = run_external(str(f), RunConfig(f"{PY} -c 'import time; time.sleep(5)'", timeout=0.3))
    assert r.verdict is Verdict.UNKNOWN and r.reason == "timeout" and r.extra["timeout"]


def test_placeholder_and_bad_config():
    assert RunConfig("solver --in {file} -v").argv("a.q") == ["solver", "--in", "a.q", "-v"]
    assert RunConfig("solver -v").argv("a.q") == ["solver", "-v", "a.q"]
    with pytest.raises(ValueError):
        RunConfig("solver", timeout=0)
    with pytest.raises(RuntimeError):
        run_external("a.q", RunConfig("/nonexistent/solver"))


def test_solver_from_environment(monkeypatch):
    monkeypatch.setenv("PGQBF_SOLVER", fake_solver(20))
    assert RunConfig().command == fake_solver(20)


def test_external_solver_reads_written_file(tmp_path):
    script = tmp_path / "solver.py"
    script.write_text("import sys\ntext = open(sys.argv[1]).read()\nsys.exit(10 if text.startswith('p cnf') else 1)\n")
    f = parse_qdimacs("p cnf 1 1\ne 1 0\n1 0\n")
    assert solve_formula(f, RunConfig(f"{PY} {script} {{file}}")).verdict is Verdict.TRUE


# -- deepening ---------------------------------------------------------------

def test_deepen_internal():
    rep = deepen(gen_polyomino_game(3, "domino"))
    assert [(r.depth, r.verdict) for r in rep.rows] == [(1, Verdict.FALSE), (3, Verdict.TRUE)]
    assert rep.verdict is Verdict.TRUE and rep.depth == 3
    table = rep.table().splitlines()
    assert len(table) == 3 and "|= phi_d" in table[0]


def test_deepen_one_vertex_and_false_game():
    assert deepen(make_game(["v"], "B", [{1}])).depth == 1
    rep = deepen(gen_lines_game(3, 3, 3), start=5)
    assert rep.verdict is Verdict.FALSE and [r.depth for r in rep.rows] == [5, 7, 9]


def test_deepen_parallel_external():
    rep = deepen(gen_lines_game(2, 2, 2), config=RunConfig(fake_solver(20), jobs=3))
    assert rep.verdict is Verdict.FALSE and [r.depth for r in rep.rows] == [1, 3]
    rep = deepen(gen_lines_game(3, 3, 3), config=RunConfig(fake_solver(10), jobs=2))
    assert rep.verdict is Verdict.TRUE and rep.depth == 1 and len(rep.rows) == 1
    rep = deepen(gen_lines_game(2, 2, 2), config=RunConfig(fake_solver(1)))
    assert rep.verdict is Verdict.UNKNOWN


def test_size_report_fields():
    g = gen_lines_game(3, 3, 3)
    data = size_report(g, encode_cor(g), EncodeOptions())
    assert data["forall"] == 4 * 4 and data["vertices"] == 9
    assert data["clauses"] <= 1.25 * data["estimate_clauses"]
    opts = EncodeOptions(Variant.ENC2)
    enc2 = size_report(g, encode(g, opts), opts)
    assert "estimate_clauses" not in enc2


# -- command line -------------------------------------------------------------

def test_gen_and_roundtrip(tmp_path, capsys):
    out = tmp_path / "g.pg"
    assert main(["gen", "lines", "-n", "3", "-k", "3", "-o", str(out)]) == 0
    assert parse_pg(out.read_text()) == gen_lines_game(3, 3, 3)
    assert main(["gen", "hex", "-n", "2"]) == 0
    assert "#blackwins" in capsys.readouterr().out


def test_encode_writes_formula_and_stats(ttt_file, tmp_path):
    out = tmp_path / "ttt.qdimacs"
    assert main(["encode", str(ttt_file), "-o", str(out)]) == 0
    f = parse_qdimacs(out.read_text())
    assert write_qdimacs(f) == out.read_text()
    stats = (tmp_path / "ttt.qdimacs.stats").read_text()
    assert "forall: 16" in stats and "estimate_clauses:" in stats


def test_encode_is_deterministic(ttt_file, tmp_path):
    a, b = tmp_path / "a.q", tmp_path / "b.q"
    for path in (a, b):
        assert main(["encode", str(ttt_file), "--encoding", "enc2", "--enc2-improvements", "-o", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_encode_json_report_and_comments(ttt_file, tmp_path):
    out = tmp_path / "t.q"
    assert main(["encode", str(ttt_file), "--comments", "--json", "-o", str(out), "--depth", "5"]) == 0
    data = json.loads((tmp_path / "t.q.stats").read_text())
    assert data["depth"] == 5 and data["encoding"] == "cor"
    assert out.read_text().startswith("c ")


def test_malformed_input_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.pg"
    bad.write_text("#times\nt1\n#positions\na\n#blackwins\nb\n")
    assert main(["encode", str(bad)]) == 2
    err = capsys.readouterr().err
    assert "line 6" in err and "#blackwins" in err
    assert main(["oracle", str(tmp_path / "missing.pg")]) == 2


def test_maker_breaker_flag_requires_no_white_sets(ttt_file):
    assert main(["encode", str(ttt_file), "--maker-breaker"]) == 2


def test_oracle_and_stats_commands(domino_file, capsys):
    assert main(["oracle", str(domino_file), "--optimal", "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["verdict"] == "TRUE" and data["optimal_depth"] == 3
    assert main(["stats", str(domino_file), "--encoding", "enc2"]) == 0
    assert "clauses:" in capsys.readouterr().out


def test_qsolve(tmp_path, capsys):
    f = tmp_path / "f.qdimacs"
    f.write_text("p cnf 2 2\na 1 0\ne 2 0\n-1 2 0\n1 -2 0\n")
    assert main(["qsolve", str(f)]) == 0
    assert capsys.readouterr().out.strip() == "TRUE"
    f.write_text("p cnf 2 2\ne 1 0\n")
    assert main(["qsolve", str(f)]) == 2


def test_run_needs_solver(ttt_file, monkeypatch):
    monkeypatch.delenv("PGQBF_SOLVER", raising=False)
    assert main(["run", str(ttt_file)]) == 2
    assert main(["run", str(ttt_file), "--solver", fake_solver(20)]) == 0
    assert main(["run", str(ttt_file), "--solver", fake_solver(3)]) == 3


def test_deepen_command(domino_file, tmp_path, capsys):
    report = tmp_path / "deepen.json"
    assert main(["deepen", str(domino_file), "--report", str(report)]) == 0
    out = capsys.readouterr().out
    assert "verdict: TRUE at depth 3" in out
    data = json.loads(report.read_text())
    assert [(r["depth"], r["verdict"]) for r in data["rows"]] == [(1, "FALSE"), (3, "TRUE")]


def test_check_command(domino_file, capsys):
    assert main(["check", str(domino_file), "--enc2", "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["status"] == "AGREE" and data["rows"][0]["game_verdict"] == "TRUE"
