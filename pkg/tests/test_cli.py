import json
import subprocess
import sys
from pathlib import Path

import pytest

SRC = str(Path(__file__).resolve().parent.parent / "src")


def run_cli(*args):
    return subprocess.run([sys.executable, "-m", "liequant.cli", *args],
                          capture_output=True, text=True,
                          env={"PYTHONPATH": SRC, "PATH": "/usr/bin:/bin"})


def test_cbh_command(tmp_path):
    out = tmp_path / "cbh.json"
    r = run_cli("cbh", "--max-degree", "3", "--out", str(out))
    assert r.returncode == 0
    data = json.loads(out.read_text())
    texts = {(e["p"], e["q"]): e["text"] for e in data["entries"]}
    assert texts[(1, 1)] == "1/2*[x1,x2]"
    assert "1/12" in texts[(2, 1)]


def test_bfamily_solve_check_roundtrip_and_determinism(tmp_path):
    f1, f2 = tmp_path / "b1.json", tmp_path / "b2.json"
    r1 = run_cli("bfamily", "solve", "--max-degree", "3", "--out", str(f1))
    r2 = run_cli("bfamily", "solve", "--max-degree", "3", "--out", str(f2))
    assert r1.returncode == 0 and r2.returncode == 0
    assert f1.read_bytes() == f2.read_bytes()
    chk = run_cli("bfamily", "check", "--bfamily", str(f1))
    assert chk.returncode == 0
    assert json.loads(chk.stdout)["ok"] is True


def test_bfamily_check_broken_family_fails(tmp_path):
    f1 = tmp_path / "b.json"
    run_cli("bfamily", "solve", "--max-degree", "3", "--out", str(f1))
    data = json.loads(f1.read_text())
    # hand-edit: zero out one degree-3 entry
    data["entries"] = [e for e in data["entries"]
                       if not (e["p"] == 1 and e["q"] == 2)]
    f1.write_text(json.dumps(data))
    chk = run_cli("bfamily", "check", "--bfamily", str(f1))
    assert chk.returncode == 1
    payload = json.loads(chk.stdout)
    assert payload["ok"] is False and payload["violations"]


def test_bad_input_exit_code(tmp_path):
    bad = tmp_path / "nope.json"
    r = run_cli("bfamily", "check", "--bfamily", str(bad))
    assert r.returncode == 2


def test_shuffle_mul(tmp_path):
    out = tmp_path / "m.json"
    r = run_cli("shuffle", "mul", "--left", "0", "--right", "1",
                "--max-degree", "3", "--hbar-order", "2", "--out", str(out))
    assert r.returncode == 0
    data = json.loads(out.read_text())
    words = {tuple(t["word"]): t["coeff"] for t in data["terms"]}
    assert words[(0, 1)][0] == "1" and words[(1,)][0] == "1/2"


def test_shuffle_hopf_check():
    r = run_cli("shuffle", "hopf-check", "--max-degree", "2",
                "--hbar-order", "2")
    assert r.returncode == 0
    assert json.loads(r.stdout)["ok"] is True


def test_qybe_cohomology():
    r = run_cli("qybe", "cohomology", "--max-n", "2", "--max-degree", "2")
    assert r.returncode == 0
    table = {row["N"]: row for row in json.loads(r.stdout)["table"]}
    assert table[1]["dim_H2"] == 1 and table[2]["dim_H2"] == 0


def test_rmatrix_command():
    r = run_cli("rmatrix", "--max-degree", "2")
    assert r.returncode == 0
    assert "R_2" in r.stderr
    payload = json.loads(r.stdout)
    assert payload["ok"] is True and len(payload["terms"]) == 3
