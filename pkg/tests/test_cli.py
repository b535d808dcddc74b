import csv
import io
import json
import math

import pytest

from pottspoly.cli import main, parse_graph_spec
from pottspoly.exact import potts_log_partition
from pottspoly.graphs import hypercube


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_gen_writes_graph(tmp_path, capsys):
    target = tmp_path / "q3.json"
    code, _, _ = run(capsys, "gen", "--kind", "hypercube", "--d", "3", "--out", str(target))
    data = json.loads(target.read_text())
    assert code == 0 and data["n"] == 8 and len(data["edges"]) == 12
    assert not [p for p in tmp_path.iterdir() if p.name.startswith(".")]


def test_exact_matches_oracle(tmp_path, capsys):
    target = tmp_path / "q3.json"
    run(capsys, "gen", "--kind", "hypercube", "--d", "3", "--out", str(target))
    code, out, _ = run(capsys, "exact", "--graph", str(target), "--q", "3", "--beta", "1.0")
    assert code == 0
    assert json.loads(out)["logZ"] == pytest.approx(potts_log_partition(hypercube(3), 3, 1.0))


def test_rc_with_p(capsys):
    code, out, _ = run(capsys, "rc", "--graph", "cycle:n=3", "--q", "2.5", "--p", "0.4")
    q, p = 2.5, 0.4
    assert code == 0
    assert json.loads(out)["logZ"] == pytest.approx(math.log(q**3 + 3 * q**2 * p + 3 * q * p**2 + q * p**3))


def test_fptas_and_verify(capsys):
    code, out, _ = run(capsys, "fptas", "--graph", "cycle:n=6", "--q", "4", "--beta", "5", "--delta", "0.01")
    rec = json.loads(out)
    assert code == 0 and rec["regime"] == "low" and "wall_time" not in rec
    code, out, _ = run(capsys, "verify", "--graph", "cycle:n=6", "--q", "4", "--beta", "5", "--delta", "0.01")
    assert code == 0 and json.loads(out)["ok"]


def test_regime_exit_code(capsys):
    code, out, err = run(capsys, "fptas", "--graph", "cycle:n=6", "--q", "4", "--beta", "1.5", "--delta", "0.1")
    assert code == 2 and out == ""
    assert json.loads(err)["error"] == "RegimeError"


def test_size_guard_exit_code(capsys, monkeypatch):
    monkeypatch.setenv("POTTS_MAX_EXHAUSTIVE", "colorings=100")
    code, _, err = run(capsys, "exact", "--graph", "hypercube:d=3", "--q", "3", "--beta", "1", "--backend", "colorings")
    assert code == 3 and json.loads(err)["exit_code"] == 3


def test_other_errors_exit_one(capsys):
    code, _, err = run(capsys, "exact", "--graph", "nosuchgraph", "--q", "3", "--beta", "1")
    assert code == 1 and json.loads(err)["error"] == "ParameterError"
    code, _, _ = run(capsys, "fptas", "--graph", "cycle:n=4", "--q", "3", "--beta", "0.1", "--delta", "2")
    assert code == 1


def test_sample_is_reproducible(capsys):
    args = ["sample", "--graph", "cycle:n=4", "--q", "4", "--beta", "0.1", "--delta", "0.05",
            "--samples", "20", "--format", "csv", "--seed", "7"]
    _, first, _ = run(capsys, *args)
    _, second, _ = run(capsys, *args)
    assert first == second
    rows = list(csv.reader(io.StringIO(first)))
    assert rows[0] == ["draw", "v0", "v1", "v2", "v3"] and len(rows) == 21


def test_ursell_and_enum_sets(capsys):
    _, out, _ = run(capsys, "ursell", "--edges", "0-1,1-2,0-2")
    assert json.loads(out)["phi"] == "1/3"
    _, out, _ = run(capsys, "enum-sets", "--graph", "hypercube:d=3", "--boundary", "4")
    assert json.loads(out)["count"] == 6
    _, out, _ = run(capsys, "enum-sets", "--graph", "path:n=3", "--root", "1")
    assert json.loads(out)["count"] == 4


def test_karger(capsys):
    _, out, _ = run(capsys, "karger", "--graph", "cycle:n=4", "--trials", "300", "--seed", "1")
    rec = json.loads(out)
    assert rec["found"] == 6 and rec["bound"] == 24 and rec["bound_holds"]


def test_kp_check(capsys):
    _, out, _ = run(capsys, "kp-check", "--graph", "cycle:n=8", "--q", "100", "--p", "0.05", "--cutoff", "5")
    rec = json.loads(out)
    assert rec["pass"] and rec["mode"] == "high_temp"


def test_experiments(capsys):
    _, out, _ = run(capsys, "experiment", "--kind", "recovery", "--graph", "cycle:n=6", "--q", "2",
                    "--sigma", "000111", "--trials", "3000", "--seed", "2")
    assert json.loads(out)["passed"]
    _, out, _ = run(capsys, "experiment", "--graph", "cycle:n=6", "--q", "3", "--beta", "0",
                    "--samples", "50", "--format", "csv", "--seed", "2")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0][:2] == ["sample", "max_fraction"] and len(rows) == 51


def test_sweep_labels_and_empty_grid(capsys):
    _, out, _ = run(capsys, "sweep", "--graph", "cycle:n=8", "--q", "3", "--beta-factors", "0.5", "1", "1.5",
                    "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["regime"] for r in rows] == ["high", "unsupported", "low"]
    _, out, _ = run(capsys, "sweep", "--graph", "cycle:n=8", "--q", "3", "--format", "csv")
    assert out.strip().split("\n") == ["cell,graph,q,param,value,seed,regime,result,status,error"]


def test_sweep_records_failures_and_resumes(tmp_path, capsys):
    target = tmp_path / "sweep.csv"
    args = ["sweep", "--task", "fptas", "--graph", "cycle:n=6", "--q", "1000", "--betas", "1.0", "7.0",
            "--format", "csv", "--out", str(target), "--seed", "3"]
    assert run(capsys, *args)[0] == 0
    first = target.read_text()
    rows = list(csv.DictReader(io.StringIO(first)))
    assert rows[0]["status"] == "ok" and rows[1]["status"] == "RegimeError"
    manifest = tmp_path / "sweep.csv.manifest.jsonl"
    assert len(manifest.read_text().splitlines()) == 2
    assert run(capsys, *args)[0] == 0
    assert target.read_text() == first
    assert len(manifest.read_text().splitlines()) == 2


def test_sweep_threads_do_not_change_rows(capsys):
    base = ["sweep", "--task", "potts-structure", "--graph", "cycle:n=4", "--q", "2", "--betas", "0.5", "2",
            "--samples", "30", "--seeds", "2", "--format", "csv", "--seed", "9"]
    _, single, _ = run(capsys, *base)
    _, multi, _ = run(capsys, *base, "--threads", "2")
    assert single == multi


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"graph": "cycle:n=3", "q": 5, "beta": 0.7}))
    code, out, _ = run(capsys, "exact", "--config", str(cfg))
    q, b = 5, 0.7
    tri = q * math.exp(3 * b) + 3 * q * (q - 1) * math.exp(b) + q * (q - 1) * (q - 2)
    assert code == 0 and json.loads(out)["logZ"] == pytest.approx(math.log(tri))
    code, out, _ = run(capsys, "exact", "--config", str(cfg), "--beta", "0")
    assert json.loads(out)["logZ"] == pytest.approx(3 * math.log(5))
    cfg.write_text(json.dumps({"bogus": 1}))
    assert run(capsys, "exact", "--config", str(cfg))[0] == 1


def test_graph_spec():
    assert parse_graph_spec("hypercube:d=3") == hypercube(3)
    assert parse_graph_spec("petersen").n == 10
