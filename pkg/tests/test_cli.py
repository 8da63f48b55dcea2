import json

import pytest
from click.testing import CliRunner

from ordmech.cli import main


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def inst_file(tmp_path, runner):
    path = tmp_path / "inst.json"
    res = runner.invoke(main, ["--seed", "3", "--out", str(path), "generate", "--n", "6"])
    assert res.exit_code == 0, res.output
    return path


def test_generate_stdout(runner):
    res = runner.invoke(main, ["generate", "--family", "closure", "--n", "5"])
    data = json.loads(res.output)
    assert data["n"] == 5 and len(data["weights"]) == 5


def test_generate_lower_bound(runner):
    res = runner.invoke(main, ["generate", "--family", "lower-bound", "--n", "3", "--k", "2"])
    assert res.exit_code == 0
    assert "hidden cluster" in res.stderr
    assert json.loads(res.stdout)["n"] == 6


def test_solve_modes(runner, inst_file):
    exact = json.loads(runner.invoke(main, ["--exact", "solve", str(inst_file), "--mechanism", "mix"]).output)
    assert exact["expected_welfare"] > 0
    mc = json.loads(runner.invoke(main, ["--samples", "200", "solve", str(inst_file),
                                         "--mechanism", "tsp-188"]).output)
    assert mc["samples"] == 200 and mc["stderr"] > 0
    one = json.loads(runner.invoke(main, ["solve", str(inst_file), "--mechanism", "rsd", "--k", "2"]).output)
    assert one["solution"]["type"] == "matching" and len(one["solution"]["data"]) == 2


def test_oracle(runner, tmp_path):
    path = tmp_path / "a.json"
    path.write_text(json.dumps({"n": 4, "weights": [[abs(a - b) for b in (0, 1, 3, 7)] for a in (0, 1, 3, 7)]}))
    res = json.loads(runner.invoke(main, ["oracle", str(path), "--problem", "tsp"]).output)
    assert res == {"problem": "tsp", "value": 18.0, "solution": {"type": "tour", "data": [0, 2, 1, 3]}}
    res = json.loads(runner.invoke(main, ["oracle", str(path), "--problem", "dks", "--k", "2"]).output)
    assert res["value"] == 7.0
    assert runner.invoke(main, ["oracle", str(path), "--problem", "matching"]).exit_code != 0


def test_audit_exit_codes(runner):
    ok = runner.invoke(main, ["audit", "--mechanism", "rsd", "--n", "4", "--k", "1", "--seeds", "2"])
    assert ok.exit_code == 0 and json.loads(ok.output) == []
    bad = runner.invoke(main, ["audit", "--mechanism", "greedy", "--n", "6", "--k", "1",
                               "--family", "regression", "--seeds", "1"])
    assert bad.exit_code == 1
    assert json.loads(bad.output)[0]["gain"] > 0


def test_ratio_writes_identical_csv(runner, tmp_path):
    outs = []
    for i in range(3):
        path = tmp_path / f"r{i}.csv"
        res = runner.invoke(main, ["--seed", "7", "--exact", "--out", str(path), "ratio", "--mechanism", "ksum",
                                   "--n", "4", "--n", "6", "--k", "2", "--seeds", "3", "--bound", "2"])
        assert res.exit_code == 0, res.output
        assert json.loads(path.with_suffix(".json").read_text())["rows"] == 6
        outs.append(path.read_bytes())
    assert outs[0] == outs[1] == outs[2]


def test_ratio_violation_exit(runner):
    res = runner.invoke(main, ["ratio", "--mechanism", "random", "--n", "6", "--k", "3", "--seeds", "3",
                               "--bound", "1.0"])
    assert res.exit_code == 1
