import json
import subprocess
import sys

import pytest

from qusort import cli, gates
from qusort.gates import Unitary
from qusort.protocols import run_bipartite, run_tripartite

SCHEMA_KEYS = {"protocol", "dim", "alphas", "inputs", "distribution", "certainty", "branches"}
BELL_ALPHAS = "0.70710678,0;0.70710678,0"


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--format", "json")
    assert code == 0, err
    return json.loads(out)


def support(report):
    return {tuple(r["labels"]): r["prob"] for r in report["distribution"] if r["prob"] > 0}


def test_bipartite_bell(capsys):
    rep = run_json(capsys, "bipartite", "--dim", "2", "--alphas", BELL_ALPHAS, "--input-a", "0", "--input-b", "1")
    assert SCHEMA_KEYS <= rep.keys()
    assert support(rep) == {(0, 0): 0.5, (1, 1): 0.5}
    assert rep["certainty"] is True
    assert rep["inputs"] == {"a": 0, "b": 1}
    assert {b["alice_outcome"]: b["labels"] for b in rep["branches"]} == {0: [[0, 0, 1, 0]], 1: [[1, 1, 0, 1]]}


def test_bipartite_product_state(capsys):
    rep = run_json(capsys, "bipartite", "--dim", "3", "--alphas", "1,0;0,0;0,0")
    assert support(rep) == {(0, 0): 1.0}


def test_bipartite_shots_pinned(capsys):
    argv = ["bipartite", "--dim", "2", "--alphas", BELL_ALPHAS, "--shots", "100000", "--seed", "42"]
    rep = run_json(capsys, *argv)
    counts = {tuple(r["labels"]): r["count"] for r in rep["shots"]["counts"]}
    assert rep["shots"]["seed"] == 42
    assert counts == {(0, 0): 50064, (0, 1): 0, (1, 0): 0, (1, 1): 49936}
    assert run_json(capsys, *argv) == rep


@pytest.mark.parametrize(
    "argv",
    [
        ["--dim", "2", "--alphas", "0.7,0;0.7,0"],
        ["--dim", "2", "--alphas", BELL_ALPHAS, "--input-a", "2"],
        ["--dim", "3", "--alphas", BELL_ALPHAS],
        ["--dim", "2", "--alphas", "1;0"],
        ["--dim", "1", "--alphas", "1,0"],
        ["--dim", "2", "--alphas", BELL_ALPHAS, "--shots", "0"],
    ],
)
def test_bipartite_usage_errors(capsys, argv):
    code, out, err = run(capsys, "bipartite", *argv)
    assert code == 2
    assert out == "" and "error" in err


def test_tripartite_ghz(capsys):
    rep = run_json(capsys, "tripartite", "--state", "ghz", "--input-a", "0", "--input-b", "0", "--input-c", "0")
    assert SCHEMA_KEYS <= rep.keys()
    assert support(rep) == {(0, 0, 0): 0.5, (1, 1, 1): 0.5}
    assert rep["certainty"] is True


@pytest.mark.parametrize("inputs", [("0", "0", "0"), ("1", "0", "1")])
def test_tripartite_w(capsys, inputs):
    a, b, c = inputs
    rep = run_json(capsys, "tripartite", "--state", "w", "--input-a", a, "--input-b", b, "--input-c", c)
    sup = support(rep)
    assert sup.keys() == {(0, 0, 1), (0, 1, 0), (1, 0, 0)}
    assert all(abs(p - 1 / 3) < 1e-12 for p in sup.values())
    assert rep["certainty"] is False
    alice0 = next(br for br in rep["branches"] if br["alice_outcome"] == 0)
    assert len(alice0["labels"]) == 2


@pytest.mark.parametrize("argv", [["--state", "ghz", "--input-c", "2"], ["--state", "cluster"], []])
def test_tripartite_usage_errors(capsys, argv):
    code, _, err = run(capsys, "tripartite", *argv)
    assert code == 2 and err


def test_verify_default(capsys):
    code, out, _ = run(capsys, "verify")
    assert code == 0
    rows = [line for line in out.splitlines() if line[:1].isdigit()]
    assert len(rows) == 7
    assert "FAIL" not in out


def test_verify_max_dim(capsys):
    code, out, _ = run(capsys, "verify", "--max-dim", "3")
    assert code == 0
    assert [line.split()[0] for line in out.splitlines() if line[:1].isdigit()] == ["2", "3"]


def test_verify_bad_max_dim(capsys):
    assert run(capsys, "verify", "--max-dim", "1")[0] == 2


def test_verify_detects_corrupted_mqs(capsys, monkeypatch):
    # a unitary impostor: SQS relabelled as MQS
    monkeypatch.setattr(gates, "mqs", lambda d: Unitary(gates.sqs(d).matrix, "MQS"))
    code, _, err = run(capsys, "verify")
    assert code == 1
    assert "eq5-factorization" in err


def test_json_round_trip_reproduces_distribution(capsys):
    for argv in (
        ["bipartite", "--dim", "3", "--alphas", "0.6,0;0,0.8;0,0", "--input-a", "2", "--input-b", "1"],
        ["tripartite", "--state", "w", "--input-b", "1"],
    ):
        rep = run_json(capsys, *argv)
        cfg = cli.config_from_report(json.loads(json.dumps(rep)))
        again = run_bipartite(cfg) if rep["protocol"] == "bipartite" else run_tripartite(cfg)
        fresh = cli.build_report(again, {k: rep[k] for k in ("protocol", "dim", "alphas", "inputs")})
        assert fresh["distribution"] == rep["distribution"]


def test_text_and_json_agree(capsys):
    argv = ["bipartite", "--dim", "3", "--alphas", "0.6,0;0,0.48;0.64,0", "--input-a", "1"]
    rep = run_json(capsys, *argv)
    code, text, _ = run(capsys, *argv, "--format", "text")
    assert code == 0
    lines = text.splitlines()
    start = lines.index("distribution:") + 1
    for row, line in zip(rep["distribution"], lines[start:start + len(rep["distribution"])]):
        assert f"{float(line.split()[-1]):.12f}" == f"{row['prob']:.12f}"


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "qusort", "tripartite", "--state", "ghz", "--input-c", "2"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 2
    assert proc.stdout == "" and proc.stderr
