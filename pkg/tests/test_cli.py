"""Command line interface: subcommands, exit codes, output contracts."""

import subprocess

import pytest

from monosmt.cli import main
from monosmt.gnf import parse

SAT_CHAIN = """p gnf 3 3
digraph 3 2 1
edge 1 0 1 1
edge 1 1 2 2
reach 1 0 2 3
1 0
2 0
3 0
"""

UNSAT_CHAIN = """p gnf 3 3
digraph 3 2 1
edge 1 0 1 1
edge 1 1 2 2
reach 1 0 2 3
-1 0
3 0
2 0
"""

TRIANGLE = """p gnf 4 1
ugraph 3 3 1
edge 1 0 1 1 1
edge 1 1 2 2 2
edge 1 0 2 3 3
mst_weight_leq 1 inf 4
4 0
"""


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out.splitlines(), captured.err


def test_solve_sat_with_witness(tmp_path, capsys):
    path = write(tmp_path, "a.gnf", SAT_CHAIN)
    code, out, _ = run(capsys, "solve", path, "--witness")
    assert code == 10
    assert out == ["s SATISFIABLE", "v 1 2 3 0", "w reach 1 0 2 : 0 1 2"]


def test_solve_unsat(tmp_path, capsys):
    path = write(tmp_path, "b.gnf", UNSAT_CHAIN)
    code, out, _ = run(capsys, "solve", path)
    assert code == 20
    assert out == ["s UNSATISFIABLE"]


def test_solve_reports_parse_errors(tmp_path, capsys):
    path = write(tmp_path, "bad.gnf", "p gnf 1 1\n1 2\n")
    code, out, err = run(capsys, "solve", path)
    assert code == 1
    assert err.startswith("error: line 2:")


def test_solve_missing_file(capsys):
    code, _, err = run(capsys, "solve", "/nonexistent.gnf")
    assert code == 1
    assert "cannot read" in err


def test_minimize_reports_probes_and_optimum(tmp_path, capsys):
    path = write(tmp_path, "tri.gnf", TRIANGLE)
    code, out, _ = run(capsys, "minimize", path, "--bound-atom", "4")
    assert code == 10
    assert out[0] == "c bound 6 SAT"
    assert all(line.startswith("c bound ") for line in out[:-3])
    assert out[-3] == "o 3"
    assert out[-2] == "s SATISFIABLE"
    assert out[-1].startswith("v ") and out[-1].endswith(" 0")


def test_minimize_infeasible(tmp_path, capsys):
    path = write(tmp_path, "lonely.gnf", """p gnf 2 2
ugraph 2 1 1
edge 1 0 1 1 4
mst_weight_leq 1 inf 2
-1 0
2 0
""")
    code, out, _ = run(capsys, "minimize", path, "--bound-atom", "2")
    assert code == 20
    assert out == ["c bound 4 UNSAT", "s UNSATISFIABLE"]


def test_minimize_wrong_atom(tmp_path, capsys):
    path = write(tmp_path, "tri.gnf", TRIANGLE)
    code, _, err = run(capsys, "minimize", path, "--bound-atom", "1")
    assert code == 1
    assert "not an mst_weight_leq atom" in err


def test_gen_writes_parseable_documents(tmp_path, capsys):
    code, out, _ = run(capsys, "gen", "maze", "3", "3", "--seed", "2")
    assert code == 0
    doc = parse("\n".join(out) + "\n")
    assert doc.meta["maze"][:2] == ["3", "3"]

    target = tmp_path / "flow.gnf"
    code, out, _ = run(capsys, "gen", "flow", "3", "2", "--mode",
                       "random1to4", "-o", str(target))
    assert code == 0 and out == []
    assert parse(target.read_text()).meta["flow"][2] == "random1to4"

    code, out, _ = run(capsys, "gen", "sched", "6", "2", "40")
    assert code == 0
    assert parse("\n".join(out) + "\n").meta["sched"] == ["6", "2", "40"]


def test_gen_rejects_bad_parameters(capsys):
    code, _, err = run(capsys, "gen", "maze", "1", "3")
    assert code == 1
    assert "width and height >= 2" in err


def test_verify_agrees_with_oracle(tmp_path, capsys):
    path = write(tmp_path, "a.gnf", SAT_CHAIN)
    code, out, _ = run(capsys, "verify", path)
    assert code == 0
    assert out == ["verify: ok (SAT, oracle agrees)"]

    path = write(tmp_path, "b.gnf", UNSAT_CHAIN)
    code, out, _ = run(capsys, "verify", path)
    assert code == 0
    assert out == ["verify: ok (UNSAT, oracle agrees)"]


def test_verify_beyond_budget_checks_model(tmp_path, capsys):
    target = tmp_path / "maze.gnf"
    assert main(["gen", "maze", "4", "4", "--seed", "1",
                 "-o", str(target)]) == 0
    capsys.readouterr()
    code, out, _ = run(capsys, "verify", str(target))
    assert code == 0
    assert out == ["verify: ok (SAT, 99 vars beyond oracle budget,"
                   " model checked)"]


def test_render_pipeline(tmp_path, capsys):
    maze = tmp_path / "maze.gnf"
    assert main(["gen", "maze", "4", "4", "--seed", "1",
                 "-o", str(maze)]) == 0
    code = main(["solve", str(maze)])
    assert code == 10
    model = tmp_path / "model.txt"
    model.write_text(capsys.readouterr().out)
    code, out, _ = run(capsys, "render", str(maze), str(model))
    assert code == 0
    art = "\n".join(out)
    assert len(out) == 9 and all(len(line) == 9 for line in out)
    assert art.count("S") == 1 and art.count("F") == 1


def test_render_rejects_non_maze(tmp_path, capsys):
    path = write(tmp_path, "a.gnf", SAT_CHAIN)
    model = write(tmp_path, "m.txt", "v 1 2 3 0\n")
    code, _, err = run(capsys, "render", path, model)
    assert code == 1
    assert "no maze metadata" in err


def test_unknown_subcommand_is_usage_error(capsys):
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 2


def test_installed_entry_point():
    proc = subprocess.run(["monosmt", "gen", "maze", "2", "2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.startswith("p gnf 19 ")
