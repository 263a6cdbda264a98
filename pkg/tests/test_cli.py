import json
import subprocess
import sys

import pytest

from koszulk3.cli import run


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_betti_rnc_over_qq(capsys):
    code, out, _ = call(capsys, "betti", "--model", "rnc:3", "--field", "qq", "--json", "-",
                        "--no-cache")
    assert code == 0
    doc = json.loads(out)
    cells = {(p, q): d for p, q, d in doc["entries"] if d}
    assert cells == {(0, 0): 1, (1, 1): 3, (2, 1): 2}


def test_verify_thm45_k2(capsys):
    code, out, _ = call(capsys, "verify", "thm45", "--k", "2", "--no-cache")
    assert code == 0 and "thm45-k2: pass" in out


def test_bott_example(capsys):
    code, out, _ = call(capsys, "bott", "--n", "5", "--quotient", "2", "--weight", "1,0|0,0,0")
    assert code == 0
    doc = json.loads(out)
    assert doc["degree"] == 0 and doc["dim"] == 5


def test_bott_zero(capsys):
    code, out, _ = call(capsys, "bott", "--n", "4", "--weight=-1,-1|0,0")
    assert code == 0 and json.loads(out) == {"zero": True}


def test_chern_and_thm44(capsys):
    assert call(capsys, "chern", "--k", "4", "--check", "tango")[0] == 0
    assert call(capsys, "chern", "--k", "3", "--sigma", "1", "--check", "thm44")[0] == 0
    assert call(capsys, "verify", "thm25", "--i", "3", "--r", "6")[0] == 0


def test_usage_and_errors(capsys):
    assert call(capsys, "frobnicate")[0] == 2
    code, _, err = call(capsys, "bott", "--n", "3", "--weight", "0,1|0")
    assert code == 2 and json.loads(err)["error"] == "ValueError"
    code, _, err = call(capsys, "betti", "--pmax", "2")
    assert code == 2 and "model" in json.loads(err)["message"]


def test_resource_exit(capsys):
    code, out, _ = call(capsys, "betti", "--model", "mukai_k3:6", "--pmax", "5", "--budget-mb",
                        "0.01", "--no-cache")
    assert code == 3 and "?" in out


def test_model_export_roundtrip(capsys, tmp_path):
    path = tmp_path / "m.json"
    code, _, _ = call(capsys, "model", "export", "--model", "ci_k3:2,3", "--seed", "4",
                      "--json", str(path))
    assert code == 0
    code, out, _ = call(capsys, "betti", "--input", str(path), "--pmax", "2", "--qmax", "2",
                        "--json", "-", "--no-cache")
    assert code == 0
    cells = {(p, q): d for p, q, d in json.loads(out)["entries"]}
    assert cells[1, 1] == 1 and cells[0, 2] == 0
    assert call(capsys, "model", "list")[0] == 0


def test_deterministic_and_cache_invariant(capsys, tmp_path):
    args = ["betti", "--model", "mukai_k3:6", "--seed", "3", "--pmax", "3", "--qmax", "2",
            "--json", "-"]
    a = call(capsys, *args, "--no-cache")[1]
    b = call(capsys, *args, "--cache", str(tmp_path))[1]
    c = call(capsys, *args, "--cache", str(tmp_path))[1]
    assert a == b == c


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "koszulk3", "bott", "--n", "3", "--weight",
                        "1|0,0"], capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["dim"] == 3
