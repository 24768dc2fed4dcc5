import subprocess
import sys

import pytest

from golden_ep.cli import main

VERBS = ["run", "table1", "table2", "list", "check"]


def cli(*args):
    return subprocess.run([sys.executable, "-m", "golden_ep", *args],
                          capture_output=True, text=True, encoding="utf-8")


@pytest.mark.parametrize("verb", VERBS)
def test_help_on_every_verb(verb):
    out = cli(verb, "--help")
    assert out.returncode == 0
    assert "usage" in out.stdout


def test_unknown_verb_and_flag_exit_2():
    assert cli("frobnicate").returncode == 2
    bad = cli("run", "example61", "--bogus")
    assert bad.returncode == 2 and "usage" in bad.stderr


def test_run_gra1_table1_configuration(capsys):
    code = main(["run", "example61", "--solver", "gra1", "--lambda", "0.27", "--tol", "1e-6",
                 "--x0", "-1,3,1,1,2"])
    out = capsys.readouterr().out
    assert code == 0
    assert out.startswith("iterations=94 ") and "status=converged" in out


def test_run_zero_budget_exits_3(capsys):
    assert main(["run", "example61", "--solver", "gra1", "--max-iter", "0"]) == 3
    assert "status=max_iter" in capsys.readouterr().out


def test_run_gra2_matches_library(capsys, ex62):
    from golden_ep.solvers import SolverConfig, StepSchedule, run

    code = main(["run", "example62", "--solver", "gra2", "--schedule", "40/(k+1)", "--tol", "1e-3"])
    out = capsys.readouterr().out
    lib = run("gra2", ex62, SolverConfig(StepSchedule.diminishing(40), tol=1e-3,
                                         x0=ex62.starting_points["paper-x0-1"]))
    assert code == 0 and out.startswith(f"iterations={lib.iterations} ")


def test_run_writes_trace(tmp_path, capsys):
    out = tmp_path / "trace.csv"
    assert main(["run", "example62", "--solver", "popov", "--schedule", "40/(k+1)",
                 "--tol", "1e-3", "--x0", "paper-x0-2", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "k,residual,energy,wall_ms" and len(lines) == 119


def test_run_errors(tmp_path, capsys):
    assert main(["run", "nonexistent-problem"]) == 2
    assert main(["run", "example61", "--x0", "1,2"]) == 2
    assert main(["run", "example61", "--schedule", "what"]) == 2
    assert main(["run", "example61", "--solver", "graal-vi"]) == 4
    assert main(["run", "example61", "--solver", "gra1", "--lambda", "5"]) == 4
    assert main(["run", "example61", "--x0", "9,0,0,0,0"]) == 4


def test_check_shipped_problems(capsys):
    assert main(["check", "example62"]) == 0
    out = capsys.readouterr().out
    for cond in ("A1: pass", "A2: pass", "A5(c1=1.75,c2=1.75): pass", "A9(gamma=0.5): pass"):
        assert cond in out
    assert main(["check", "example21"]) == 0
    assert "A9(gamma=0.5): pass" in capsys.readouterr().out


def test_check_corrupted_problem_exits_5(tmp_path, capsys):
    from golden_ep.problems import shipped_problem_files

    text = shipped_problem_files()["example61"].read_text()
    bad = tmp_path / "bad.txt"
    bad.write_text(text.replace("matrix Q = 1.6", "matrix Q = -1.6"))
    assert main(["check", str(bad)]) == 5
    assert "construction failed" in capsys.readouterr().out


def test_check_violation_lists_witness(tmp_path, capsys):
    p = tmp_path / "false.txt"
    p.write_text("dim = 3\noperator = radial\nspace = l2\nstrong_modulus = 5\nset = ball(1)\n")
    assert main(["check", str(p), "--samples", "200"]) == 5
    assert "violated A9" in capsys.readouterr().out


def test_check_honours_seed_env(tmp_path):
    out = subprocess.run([sys.executable, "-m", "golden_ep", "check", "example21", "--samples", "50"],
                         capture_output=True, text=True, env={"EQ_SEED": "7", "PATH": ""})
    assert out.returncode == 0


def test_list(capsys):
    assert main(["list"]) == 0
    out = capsys.readouterr().out
    assert "gra1" in out and "example62" in out


def test_tables_are_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["table1", "--out", str(a)]) == 0
    assert main(["table1", "--out", str(b)]) == 0
    assert main(["table2", "--out", str(a)]) == 0
    assert main(["table2", "--out", str(b)]) == 0
    files = sorted(p.relative_to(a) for p in a.rglob("*") if p.is_file())
    assert {"table1.md", "table1.csv", "table2.md", "table2.csv"} <= {f.as_posix() for f in files}
    for f in files:
        assert (a / f).read_bytes() == (b / f).read_bytes()
