from __future__ import annotations

import csv
import io
import json
import subprocess
import sys

import pytest

from coarse_dyn.cli import main
from coarse_dyn.verifier import SCENARIOS


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_list(capsys):
    code, out = run(capsys, "list")
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == len(SCENARIOS)
    assert any(line.startswith("squares → ") for line in lines)
    assert any(line.startswith("qwerty → ") for line in lines)


def test_verify_squares_json(capsys):
    code, out = run(capsys, "verify", "squares", "--k", "2", "--n", "1", "--window", "1:100", "--step", "1/8",
                    "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["schema"] == "v1"
    upper = [c for c in data["claims"] if c["id"] == "upper-bound"][0]
    assert upper["bound"] == 0.5 and upper["verdict"] == "PASS"


def test_json_is_byte_identical(capsys):
    args = ("verify", "strips", "--k", "1", "--n", "2", "--format", "json")
    _, first = run(capsys, *args)
    _, second = run(capsys, *args)
    assert first == second


def test_verify_strips_witness(capsys):
    code, out = run(capsys, "verify", "strips", "--k", "1", "--n", "2", "--format", "json")
    assert code == 0
    c = [c for c in json.loads(out)["claims"] if c["id"] == "f-not-controlled"][0]
    pairs = c["witness"]["pairs"]
    assert pairs[3] == [{"type": "strip", "r": "8", "j": 0}, {"type": "strip", "r": "8", "j": 1}]
    assert c["witness"]["image_distances"][3] == "24"


def test_verify_strips_with_l(capsys):
    code, out = run(capsys, "verify", "strips", "--k", "2", "--l", "2", "--window", "0:8")
    assert code == 0 and "g-controlled" in out


def test_verify_grid_hypothesis(capsys):
    code, out = run(capsys, "verify", "grid", "--scenario", "hypothesis", "--window", "0:4", "--n-range", "1:6",
                    "--format", "json")
    assert code == 0
    values = {c["id"]: c["value"] for c in json.loads(out)["claims"]}
    assert values["phi-equivalence"] == "3" and values["psi-equivalence"] == "1"


def test_verify_other_scenarios(capsys):
    assert run(capsys, "verify", "qwerty", "--F", "4", "--G", "2")[0] == 0
    assert run(capsys, "verify", "decompose", "--n-range", "2:8")[0] == 0
    assert run(capsys, "verify", "section", "--scenario", "strip", "--k", "2", "--window", "0:16")[0] == 0


def test_failing_claims_exit_one(capsys):
    # G above F: the crossover never happens within the search cap
    code, out = run(capsys, "verify", "qwerty", "--F", "2", "--G", "3")
    assert code == 0
    code, out = run(capsys, "verify", "qwerty", "--F", "2", "--G", "3", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0][:4] == ["scenario", "claim", "paper_anchor", "verdict"]


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "squares", "--k", "1"])
    assert exc.value.code == 2
    assert "usage hint" in capsys.readouterr().err
    with pytest.raises(SystemExit) as exc:
        main(["verify", "squares", "--k", "1", "--n", "1", "--precision", "32"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["verify", "squares", "--k", "1", "--n", "1", "--step", "0.3", "--window", "1:2"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit):
        main(["verify", "torus"])


def test_precision_env(capsys, monkeypatch):
    monkeypatch.setenv("COARSE_DYN_PRECISION", "40")
    with pytest.raises(SystemExit) as exc:
        main(["verify", "squares", "--k", "1", "--n", "1", "--window", "1:4"])
    assert exc.value.code == 2
    monkeypatch.setenv("COARSE_DYN_PRECISION", "256")
    assert main(["verify", "squares", "--k", "1", "--n", "1", "--window", "1:4"]) == 0


def test_output_file_and_timing(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["verify", "qwerty", "--format", "json", "--timing", "--output", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["runtime_ms"] is not None


def test_dump_grid(capsys):
    code, out = run(capsys, "dump-grid", "--n-range", "1:2", "--window", "0:1")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["x.nsq", "x.r", "x.k", "a.nsq", "a.r", "a.k", "b.nsq", "b.r", "b.k", "dist"]
    assert all(r[-1] == "0" for r in rows[1:])
    code, out = run(capsys, "dump-grid", "--a", "grid.phi*grid.PsiInv", "--b", "id.grid_y", "--n-range", "1:1",
                    "--window", "0:0")
    rows = list(csv.reader(io.StringIO(out)))
    assert max(int(r[-1]) for r in rows[1:]) == 3


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "coarse_dyn", "list"], capture_output=True, text=True)
    assert res.returncode == 0 and "grid → " in res.stdout
