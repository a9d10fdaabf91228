"""CLI tests: exit codes, output formats, reproducibility."""

import io
import json

import pytest

from distqec.cli import (EXIT_CONFIG, EXIT_OK, EXIT_VERIFY, cmd_codes_list,
                         cmd_simulate, cmd_sweep, cmd_verify, main,
                         _two_qubit_stabilizer_states)
from distqec.config import load_config


def test_codes_list_table():
    out = io.StringIO()
    assert cmd_codes_list(out) == EXIT_OK
    text = out.getvalue()
    assert "513" in text and "steane713" in text and "trivial" in text
    assert text.splitlines()[0].startswith("name")


def test_two_qubit_stabilizer_states_count():
    states = list(_two_qubit_stabilizer_states())
    assert len(states) == 60
    groups = set()
    for g1, g2 in states:
        assert g1.commutes(g2)
        groups.add(frozenset({str(g1), str(g2), str(g1 * g2)}))
    assert len(groups) == 60


def test_verify_cz_passes():
    out = io.StringIO()
    assert cmd_verify("cz", out) == EXIT_OK
    report = json.loads(out.getvalue())
    assert report["status"] == "pass"
    assert report["inputs"] == 60
    assert report["branches_checked"] > 0


def test_verify_bellprep_passes():
    out = io.StringIO()
    assert cmd_verify("bellprep", out) == EXIT_OK
    report = json.loads(out.getvalue())
    assert report["status"] == "pass"
    # 4 generators per block + XX + ZZ
    assert report["checked_operators"] == 10


def test_verify_interface_passes():
    out = io.StringIO()
    assert cmd_verify("interface", out) == EXIT_OK
    report = json.loads(out.getvalue())
    assert report["status"] == "pass" and report["violations"] == 0
    assert set(report["caught_state_classes"]) >= {
        "node_flip", "tail1_flip", "tail2_flip", "vpair_flip"}


def test_simulate_outputs_and_determinism(tmp_path):
    cfg_path = tmp_path / "cfg.json"
    records_path = tmp_path / "records.jsonl"
    summary_path = tmp_path / "summary.json"
    cfg_path.write_text(json.dumps({
        "name": "smoke", "trials": 5, "p_success": 0.5, "seed": 3,
        "records_path": str(records_path),
        "summary_path": str(summary_path)}))
    out = io.StringIO()
    assert cmd_simulate(load_config(str(cfg_path)), out) == EXIT_OK
    first = out.getvalue()
    summary = json.loads(first)
    assert summary["name"] == "smoke" and summary["n_trials"] == 5
    lines = records_path.read_text().strip().splitlines()
    assert len(lines) == 5
    rec0 = json.loads(lines[0])
    assert {"trial_index", "wait_time", "logical_error"} <= set(rec0)
    assert json.loads(summary_path.read_text())["n_trials"] == 5
    # byte-identical rerun
    bytes_a = records_path.read_bytes()
    out2 = io.StringIO()
    assert cmd_simulate(load_config(str(cfg_path)), out2) == EXIT_OK
    assert out2.getvalue() == first
    assert records_path.read_bytes() == bytes_a


def test_simulate_cli_overrides(tmp_path):
    cfg = load_config(overrides={"trials": 5, "p_success": 0.9})
    cfg = cfg.with_values(trials=2, seed=11)
    out = io.StringIO()
    assert cmd_simulate(cfg, out) == EXIT_OK
    assert json.loads(out.getvalue())["n_trials"] == 2


def test_sweep_csv(tmp_path):
    cfg = load_config(overrides={
        "trials": 3, "p_success": 0.9,
        "sweep": [{"parameter": "p_success", "values": [0.5, 1.0]}]})
    out = io.StringIO()
    assert cmd_sweep(cfg, out) == EXIT_OK
    lines = out.getvalue().strip().splitlines()
    assert lines[0].startswith("p_success,n_trials,")
    assert len(lines) == 3
    assert lines[1].startswith("0.5,3,") and lines[2].startswith("1.0,3,")


def test_config_error_exit_code(tmp_path, capfd):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps({"trials": -1}))
    assert main(["simulate", "--config", str(cfg_path)]) == EXIT_CONFIG
    assert "trials" in capfd.readouterr().err
    assert main(["simulate", "--config",
                 str(tmp_path / "nope.json")]) == EXIT_CONFIG
    capfd.readouterr()


def test_faults_command(tmp_path, capfd):
    out_csv = tmp_path / "ghz.csv"
    assert main(["faults", "ghz", "--out", str(out_csv)]) == EXIT_OK
    text = capfd.readouterr().out
    assert "0 violations" in text
    header = out_csv.read_text().splitlines()[0]
    assert header == ("fault_location,fault_pauli,verification_outcome,"
                      "residual_weight,logical_error,detail")


def test_verify_failure_exit_code(monkeypatch):
    import distqec.cli as cli
    monkeypatch.setitem(cli._VERIFIERS, "cz", lambda report: False)
    out = io.StringIO()
    assert cmd_verify("cz", out) == EXIT_VERIFY
    assert json.loads(out.getvalue())["status"] == "fail"
