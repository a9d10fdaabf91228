"""Unit tests for configuration loading, validation and sweeps."""

import json

import pytest

from distqec.config import (ConfigError, ExperimentConfig, expand_sweep,
                            env_overrides, load_config)


def write(tmp_path, data, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(data, indent=2))
    return str(p)


def test_defaults():
    cfg = load_config()
    assert cfg == ExperimentConfig()
    assert cfg.code == "513" and cfg.trials == 1000 and cfg.ec_mode == "basic"


def test_file_loading_and_overrides(tmp_path):
    path = write(tmp_path, {"p_success": 0.5, "trials": 10, "ec_mode": "ft"})
    cfg = load_config(path)
    assert (cfg.p_success, cfg.trials, cfg.ec_mode) == (0.5, 10, "ft")
    cfg = load_config(path, overrides={"trials": 99})
    assert cfg.trials == 99


def test_env_overrides_precedence(tmp_path):
    path = write(tmp_path, {"trials": 10, "seed": 1})
    env = {"DISTQEC_TRIALS": "20", "DISTQEC_NAME": "from-env"}
    cfg = load_config(path, environ=env)
    assert cfg.trials == 20 and cfg.name == "from-env" and cfg.seed == 1
    # explicit overrides beat the environment
    cfg = load_config(path, overrides={"trials": 30}, environ=env)
    assert cfg.trials == 30
    assert env_overrides({"DISTQEC_P1": "0.01"}) == {"p1": 0.01}


def test_unknown_key_rejected_with_line(tmp_path):
    path = write(tmp_path, {"p_success": 0.5, "bogus": 1})
    with pytest.raises(ConfigError) as ei:
        load_config(path)
    assert ei.value.key == "bogus"
    assert ei.value.line is not None
    assert path in str(ei.value)


@pytest.mark.parametrize("key,value", [
    ("p_success", 0.0), ("p_success", 1.5), ("p1", -0.1), ("trials", 0),
    ("trials", 2.5), ("ec_mode", "fancy"), ("seed", -1),
    ("t_attempt", 0), ("fixed_n", -2), ("name", ""),
    ("detectors", True),
])
def test_value_validation(tmp_path, key, value):
    path = write(tmp_path, {key: value})
    with pytest.raises(ConfigError) as ei:
        load_config(path)
    assert ei.value.key == key


def test_invalid_json_and_missing_file(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ConfigError):
        load_config(str(bad))
    with pytest.raises(ConfigError):
        load_config(str(tmp_path / "missing.json"))
    top = tmp_path / "arr.json"
    top.write_text("[1, 2]")
    with pytest.raises(ConfigError):
        load_config(str(top))


def test_sweep_validation(tmp_path):
    good = write(tmp_path, {"sweep": [
        {"parameter": "p1", "values": [0.001, 0.01]},
        {"parameter": "trials", "values": [10]}]})
    cfg = load_config(good)
    assert len(cfg.sweep) == 2
    for data in (
            {"sweep": "nope"},
            {"sweep": [{"parameter": "code", "values": ["513"]}]},
            {"sweep": [{"parameter": "p1", "values": []}]},
            {"sweep": [{"parameter": "p1", "values": [2.0]}]},
            {"sweep": [{"parameter": "p1"}]},
            {"sweep": [{"parameter": "p1", "values": [0.1]}] * 3}):
        with pytest.raises(ConfigError):
            load_config(write(tmp_path, data, "s.json"))


def test_expand_sweep_row_major():
    cfg = load_config(overrides={"sweep": [
        {"parameter": "p1", "values": [0.1, 0.2]},
        {"parameter": "seed", "values": [1, 2]}]})
    cells = list(expand_sweep(cfg))
    assert [c[0] for c in cells] == [
        {"p1": 0.1, "seed": 1}, {"p1": 0.1, "seed": 2},
        {"p1": 0.2, "seed": 1}, {"p1": 0.2, "seed": 2}]
    assert all(c[1].sweep == () for c in cells)
    assert cells[3][1].p1 == 0.2 and cells[3][1].seed == 2
    # no sweep: a single cell equal to the config itself
    only = list(expand_sweep(load_config()))
    assert only == [({}, load_config())]
