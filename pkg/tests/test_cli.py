"""Command-line driver, config handling and reports."""

import json

import pytest

from csmultiform import chern_simons as cs
from csmultiform.cli import main
from csmultiform.config import ConfigError, RunConfig, read_config_file
from csmultiform.report import strip_timing

FAST_NUMERIC = ["--h-schedule", "0.05,0.025", "--pi-h-schedule", "0.1,0.05", "--order-tol", "0.6",
                "--quad-orders", "2,4,6"]


def run(tmp_path, *argv, name="report.json"):
    out = tmp_path / name
    code = main([*argv, "--out", str(out)])
    return code, (json.loads(out.read_text()) if out.exists() else None), out


def test_verify_small_window_passes(tmp_path):
    code, rep, _ = run(tmp_path, "verify", "--window", "5", "--n-max", "1")
    assert code == 0
    assert rep["schema_version"] == "1" and rep["summary"]["passed"]
    names = [c["name"] for c in rep["checks"]]
    assert names[0] == "algebra_properties" and names[-1] == "first_variation_n1"
    l5 = next(c for c in rep["checks"] if c["name"] == "components_L5")
    assert l5["measured"]["constant"] == "1"
    assert all(set(c) == {"name", "anchor", "status", "measured", "timing_s"} for c in rep["checks"])


def test_window_too_small_rejected(tmp_path, capsys):
    code, rep, _ = run(tmp_path, "verify", "--window", "4", "--n-max", "2")
    assert code == 2 and rep is None
    assert "too small" in capsys.readouterr().err


def test_corrupted_reference_fails(tmp_path, monkeypatch):
    good = cs.reference_L3
    monkeypatch.setattr(cs, "reference_L3", lambda p, q, r: -good(p, q, r))
    code, rep, _ = run(tmp_path, "verify", "--window", "5", "--n-max", "1")
    assert code == 1
    assert rep["summary"]["failed"] == ["components_L3"]


def test_verify_deterministic_across_threads(tmp_path):
    _, r1, _ = run(tmp_path, "verify", "--window", "5", "--n-max", "1", "--threads", "1", name="a.json")
    _, r8, _ = run(tmp_path, "verify", "--window", "5", "--n-max", "1", "--threads", "8", name="b.json")
    assert json.dumps(strip_timing(r1)) == json.dumps(strip_timing(r8))


def test_numeric_fast_config(tmp_path):
    csv_path = tmp_path / "tables.csv"
    code, rep, _ = run(tmp_path, "numeric", *FAST_NUMERIC, "--csv", str(csv_path))
    assert code == 0, [c for c in rep["checks"] if c["status"] != "pass"]
    closure = next(c for c in rep["checks"] if c["name"] == "action_closure")
    assert [row["order"] for row in closure["measured"]["table"]] == [2, 4, 6]
    lines = csv_path.read_text().splitlines()
    assert lines[0] == "check,table,row,column,value"
    assert any(line.startswith("goursat_order,table,1,max_error,") for line in lines)


def test_numeric_deterministic_across_threads(tmp_path):
    args = ["numeric", *FAST_NUMERIC]
    _, r1, _ = run(tmp_path, *args, "--threads", "1", name="a.json")
    _, r8, _ = run(tmp_path, *args, "--threads", "8", name="b.json")
    assert json.dumps(strip_timing(r1)) == json.dumps(strip_timing(r8))


def test_pole_in_domain_reported(tmp_path, capsys):
    code, rep, _ = run(tmp_path, "numeric", "--c", "-0.2")
    assert code == 2 and rep is None
    err = capsys.readouterr().err
    assert "pole" in err and "xi = [" in err


def test_h_schedule_must_decrease(tmp_path):
    code, _, _ = run(tmp_path, "numeric", "--h-schedule", "0.01,0.02")
    assert code == 2


def test_config_file_and_flag_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# symbolic run\nwindow = 6\nn-max = 1\ntrials = 3\n")
    code, rep, _ = run(tmp_path, "verify", "--config", str(cfg), "--window", "5")
    assert code == 0
    assert rep["config"]["window"] == 5 and rep["config"]["trials"] == 3


def test_config_errors(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("window 5\n")
    with pytest.raises(ConfigError):
        read_config_file(bad)
    with pytest.raises(ConfigError):
        RunConfig.from_mapping({"nonsense": 1})
    with pytest.raises(ConfigError):
        RunConfig.from_mapping({"window": "five"})
    with pytest.raises(ConfigError):
        RunConfig(window=6, n_max=2).checked("verify")
    RunConfig(window=7, n_max=2).checked("verify")


def test_text_format(tmp_path, capsys):
    assert main(["verify", "--window", "5", "--format", "text", "--trials", "2"]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[-1] == "8/8 checks passed"
    assert "PASS  mdc" in out
