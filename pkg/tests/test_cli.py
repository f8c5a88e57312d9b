import json
import subprocess
import sys
from pathlib import Path

import pytest

from ordlab.cli import main

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_walk_commands(capsys):
    assert run(capsys, "walk", "eval", "--alpha", "3", "--beta", "w") == (0, "3\n")
    assert run(capsys, "walk", "eval", "--fn", "rho2", "--alpha", "3", "--beta", "w") == (0, "1\n")
    assert run(capsys, "walk", "sublevel", "--alpha", "w+2", "--c", "1") == (0, "0, 1, w, w+1, w+2\n")
    assert run(capsys, "walk", "trace", "--alpha", "3", "--beta", "w+1") == (0, "w+1, w, 3\n")


def test_bad_ordinal_is_exit_2(capsys):
    assert main(["walk", "eval", "--alpha", "x", "--beta", "2"]) == 2
    assert "error" in capsys.readouterr().err


def test_matrix_verify(capsys, tmp_path):
    code, out = run(capsys, "matrix", "verify", "--universe", "sampler:1:w:3:25", "--xi-max", "4", "--out", str(tmp_path / "m.json"))
    assert code == 0
    assert json.loads(out)["axioms"]["G4"]["status"] == "pass"
    assert json.loads((tmp_path / "m.json").read_text()) == json.loads(out)


def test_matrix_verify_tree_provider(capsys):
    code, out = run(capsys, "matrix", "verify", "--provider", f"tree:{CONFIGS / 'fragment.tree'}", "--xi-max", "2")
    assert code == 0 and json.loads(out)["axioms"]["G4"]["checked"] > 0


def test_tree_verify(capsys):
    assert run(capsys, "tree", "verify", str(CONFIGS / "fragment.tree"))[0] == 0
    code, out = run(capsys, "tree", "verify", "builtin:mutant")
    assert code == 1
    assert json.loads(out)["axioms"]["G4"]["counterexample"]["reason"] == "predecessor not unique"


def test_tree_linf(capsys):
    assert json.loads(run(capsys, "tree", "linf", "--op", "gen", "--beta", "3", "--alpha", "3")[1]) == [3, 2, 1]
    assert run(capsys, "tree", "linf", "--op", "witness", "(1,1)", "(3,1)", "--m", "1", "--n", "3")[1] == "5\n"
    assert run(capsys, "tree", "linf", "--op", "norm", "(1,5)", "(3,1)")[1] == "4\n"


def test_sets_eval(capsys):
    code, out = run(capsys, "sets", "eval", "THIN", "--file", str(CONFIGS / "sets.txt"), "--member", "4", "2")
    doc = json.loads(out)
    assert code == 0 and doc["finite"] is False and doc["member"] == {"2": False, "4": True}
    doc = json.loads(run(capsys, "sets", "eval", "(diff (fin 1 2 4) (ep period=10))")[1])
    assert doc["finite"] is True


def test_tower_build_verify(capsys, tmp_path):
    out = tmp_path / "t.txt"
    assert main(["tower", "build", "--indices", "0,1,2,w,w+1", "--out", str(out)]) == 0
    code, text = run(capsys, "tower", "verify", str(out))
    assert code == 0 and json.loads(text)["axioms"]["certificates"]["status"] == "pass"
    out.write_text(out.read_text().replace("index 0 S0", "index 0 S4").replace("index w+1 S4", "index w+1 S0"))
    assert main(["tower", "verify", str(out)]) == 1


def test_gap_commands(capsys):
    gap = str(CONFIGS / "mod4.gap")
    assert run(capsys, "gap", "verify", gap)[0] == 0
    code, out = run(capsys, "gap", "split", gap, "(ep period=1100)")
    assert code == 0 and json.loads(out) == {"splits": True, "levels": {"0": 0, "1": 0}}
    code, out = run(capsys, "gap", "split", gap, "EVENS", "--sets", str(CONFIGS / "sets.txt"))
    assert code == 1 and json.loads(out) == {"splits": False, "index": "1", "side": "a"}
    code, out = run(capsys, "gap", "hausdorff", gap, "0", "1")
    assert json.loads(out) == ["0"]


def test_group_commands(capsys, tmp_path):
    els = tmp_path / "els.txt"
    els.write_text("{}\n{1}\n{1,w}\n{w*2,3}\n")
    code, out = run(capsys, "group", "verify", "--elements", str(els), "--alphas", "w,w*2", "--xi", "0..2")
    assert code == 0
    seq = tmp_path / "seq.txt"
    seq.write_text("{1}\n{w+5}\n{w+9}\n{w*2}\n")
    code, out = run(capsys, "group", "converge", "--seq", str(seq), "--nbhd", "1,w*2")
    assert code == 0


def test_lab_run_files(capsys, tmp_path):
    code = main(["lab", "run", str(CONFIGS / "structures.yaml"), "--out", str(tmp_path), "--format", "csv"])
    assert code == 0
    assert len((tmp_path / "report.csv").read_text().splitlines()) == 8
    assert main(["lab", "run", str(CONFIGS / "corrupted.yaml"), "--only", "matrix.G2"]) == 1
    assert main(["lab", "run", "builtin:nope"]) == 2
    assert main(["lab", "run", "builtin:tree", "--only", "walks.S7"]) == 2


def test_console_script():
    out = subprocess.run([sys.executable, "-m", "ordlab.cli", "walk", "eval", "--fn", "rho2", "--alpha", "0", "--beta", "w^w"],
                         capture_output=True, text=True, check=True)
    assert out.stdout == "2\n"
