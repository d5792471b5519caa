import json
import os
import subprocess
import sys

import pytest

from cilogic.cli import main
from cilogic.formats import parse_dag, parse_statement_set, parse_witness

FIG2 = "node 1\nnode 2\nnode 3\nnode 4\nnode 5\nedge 1 2\nedge 1 3\nedge 2 4\nedge 3 4\nedge 4 5\n"
LIST = "order 1 2 3 4 5\nparents 1 :\nparents 2 : 1\nparents 3 : 1\nparents 4 : 2 3\nparents 5 : 4\n"


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, text in {
        "diamond.dag": FIG2,
        "L.txt": LIST,
        "det.dag": "node a\nnode b\nnode c\nnode e\nedge a b\nedge b c\nedge b e\ndeterministic b\n",
        "batch.txt": "I(2 ; 1 ; 3)\n# comment\nI(2 ; 1,5 ; 3)\n",
        "set.txt": "universe 1 2 3\nI(1 ; ; 2,3)\n",
        "broken.dag": "node a\nedge a b\n",
    }.items():
        p = tmp_path / name
        p.write_text(text)
        paths[name] = str(p)
    return paths


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_dsep_verdicts(files, capsys):
    code, out, _ = run(capsys, "dsep", files["diamond.dag"], "I(2 ; 1 ; 3)")
    assert code == 0 and "separated" in out
    code, out, _ = run(capsys, "dsep", files["diamond.dag"], "I(2 ; 1,5 ; 3)")
    assert code == 1 and out.strip().endswith("2 4 3")
    code, out, _ = run(capsys, "dsep", files["diamond.dag"], "I(2 ; 1,5 ; 3)", "--format", "structured")
    assert json.loads(out) == {"statement": "I(2 ; 1,5 ; 3)", "separated": False, "witness": ["2", "4", "3"]}


def test_idsep_and_batch(files, capsys):
    assert run(capsys, "idsep", files["det.dag"], "I(c ; a ; e)")[0] == 0
    assert run(capsys, "dsep", files["det.dag"], "I(c ; a ; e)")[0] == 1
    code, out, _ = run(capsys, "dsep", files["diamond.dag"], "--batch", files["batch.txt"])
    lines = out.splitlines()
    assert code == 1 and len(lines) == 2
    assert lines[0] == "I(2 ; 1 ; 3) separated"


def test_build(files, capsys, tmp_path):
    code, out, _ = run(capsys, "build", files["L.txt"])
    assert code == 0
    assert parse_dag(out).edges == {("1", "2"), ("1", "3"), ("2", "4"), ("3", "4"), ("4", "5")}
    target = tmp_path / "out.dag"
    run(capsys, "build", files["L.txt"], "-o", str(target))
    assert target.read_text() == out


def test_closure_and_derives(files, capsys):
    code, out, _ = run(capsys, "closure", files["set.txt"], "--format", "structured")
    closed = parse_statement_set(out)
    assert code == 0 and len(closed) == 5
    assert run(capsys, "derives", files["set.txt"], "I(1 ; 2 ; 3)")[0] == 0
    assert run(capsys, "derives", files["set.txt"], "I(2 ; ; 3)")[0] == 1


def test_counterexample(files, capsys):
    code, out, _ = run(capsys, "counterexample", files["diamond.dag"], "I(2 ; 1,5 ; 3)", "--rho", "1/3")
    report = parse_witness(out)
    assert code == 0 and report["passed"] and report["exponent"] == 4
    code, out, _ = run(capsys, "counterexample", files["diamond.dag"], "I(2 ; 1 ; 3)")
    assert code == 1 and "graphically verified" in out


def test_requisite(files, capsys):
    code, out, _ = run(capsys, "requisite", files["diamond.dag"], "--x", "5", "--y", "2")
    assert code == 0 and out.split() == ["1", "2", "3", "4", "5"]
    code, out, _ = run(capsys, "requisite", files["diamond.dag"], "--x", "2", "--y", "1", "--format", "structured")
    assert json.loads(out)["requisite"] == ["1", "2"]


def test_verify_small(capsys):
    code, out, _ = run(capsys, "verify", "theorem2", "--count", "5", "--max-nodes", "4", "--seed", "3", "--format", "structured")
    data = json.loads(out)
    assert code == 0 and data["passed"] and data["checked"] == 5


def test_error_statuses(files, capsys):
    code, _, err = run(capsys, "dsep", files["broken.dag"], "I(a ; ; b)")
    assert code == 2 and "line 2, column 8" in err
    code, _, err = run(capsys, "dsep", files["diamond.dag"], "I(2 ; 1 ; 3")
    assert code == 2 and "line 1" in err
    code, _, err = run(capsys, "dsep", files["diamond.dag"], "I(2 ; 1 ; 9)")
    assert code == 2
    code, _, err = run(capsys, "dsep", files["diamond.dag"] + ".missing", "I(2 ; 1 ; 3)")
    assert code == 2
    code, _, err = run(capsys, "closure", files["set.txt"], "--max-nodes", "2")
    assert code == 3 and "limit" in err
    code, _, _ = run(capsys, "verify", "perfectmap", "--max-nodes", "6")
    assert code == 3


def test_console_script_is_deterministic(files):
    cmd = [sys.executable, "-m", "cilogic.cli", "verify", "armstrong", "--count", "3", "--seed", "9", "--format", "structured"]
    env = dict(os.environ)
    first = subprocess.run(cmd, capture_output=True, env=env, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, env=env, check=True).stdout
    assert first == second and json.loads(first)["passed"]
