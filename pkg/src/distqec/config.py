"""Experiment configuration: JSON files, validation, environment overrides.

Documented keys (all optional except where noted):

  name          experiment label (string, default "experiment")
  code          code registry name (default "513")
  node_preset   node ledger preset name (default "513-ft")
  p_success     per-attempt link heralding probability in (0, 1] (default 0.1)
  t_attempt     model time per link attempt, > 0 (default 1.0)
  bell_error    delivered-pair Pauli error probability in [0, 1] (default 0.0)
  p_mem         per-idle-tick memory error probability (default 0.0)
  p1            1-qubit gate depolarizing probability (default 0.0)
  p2            2-qubit gate depolarizing probability (default 0.0)
  p_meas        measurement flip probability (default 0.0)
  ec_mode       "basic" or "ft" (default "basic")
  detectors     multiplexer detector resources, >= 1 (default 1)
  seed          master RNG seed (default 0)
  trials        Monte Carlo trials, >= 1 (default 1000)
  ec_cycle_time model time per EC cycle; one cycle per elapsed unit while
                the link is pending (default 1.0)
  fixed_n       fixed EC cycle count, overriding wait-derived N (default null)
  sweep         list of up to 2 axes: [{"parameter": key, "values": [...]}]
  records_path  JSON-lines TrialRecord output path (default null = stdout off)
  summary_path  summary JSON output path (default null)

Any key can be overridden by an environment variable DISTQEC_<KEY> (upper
case), parsed as JSON.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, fields, replace

ENV_PREFIX = "DISTQEC_"


class ConfigError(ValueError):
    """Named configuration validation error, with a line reference when the
    offending key came from a file."""

    def __init__(self, key: str, message: str, line: int | None = None,
                 path: str | None = None):
        self.key = key
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where = f" ({path}" + (f":{line}" if line else "") + ")"
        super().__init__(f"config key {key!r}: {message}{where}")


def _prob(lo=0.0, lo_open=False):
    def check(v):
        ok = isinstance(v, (int, float)) and not isinstance(v, bool) \
            and (v > lo if lo_open else v >= lo) and v <= 1.0
        return ok, f"must be a number in {'(' if lo_open else '['}{lo}, 1]"
    return check


def _positive(v):
    ok = isinstance(v, (int, float)) and not isinstance(v, bool) and v > 0
    return ok, "must be a positive number"


def _pos_int(v):
    return isinstance(v, int) and not isinstance(v, bool) and v >= 1, \
        "must be an integer >= 1"


def _string(v):
    return isinstance(v, str) and bool(v), "must be a nonempty string"


def _choice(*opts):
    def check(v):
        return v in opts, f"must be one of {opts}"
    return check


def _seed(v):
    return isinstance(v, int) and not isinstance(v, bool) and v >= 0, \
        "must be a nonnegative integer"


def _opt(inner):
    def check(v):
        if v is None:
            return True, ""
        return inner(v)
    return check


def _path(v):
    return v is None or isinstance(v, str), "must be a string path or null"


_VALIDATORS = {
    "name": _string,
    "code": _string,
    "node_preset": _string,
    "p_success": _prob(lo_open=True),
    "t_attempt": _positive,
    "bell_error": _prob(),
    "p_mem": _prob(),
    "p1": _prob(),
    "p2": _prob(),
    "p_meas": _prob(),
    "ec_mode": _choice("basic", "ft"),
    "detectors": _pos_int,
    "seed": _seed,
    "trials": _pos_int,
    "ec_cycle_time": _positive,
    "fixed_n": _opt(_seed),
    "sweep": None,          # structural check in _validate_sweep
    "records_path": _path,
    "summary_path": _path,
}

# keys a sweep axis may range over
SWEEPABLE = ("p_success", "t_attempt", "bell_error", "p_mem", "p1", "p2",
             "p_meas", "ec_cycle_time", "trials", "fixed_n", "detectors",
             "seed")


@dataclass(frozen=True)
class SweepAxis:
    parameter: str
    values: tuple


@dataclass(frozen=True)
class ExperimentConfig:
    name: str = "experiment"
    code: str = "513"
    node_preset: str = "513-ft"
    p_success: float = 0.1
    t_attempt: float = 1.0
    bell_error: float = 0.0
    p_mem: float = 0.0
    p1: float = 0.0
    p2: float = 0.0
    p_meas: float = 0.0
    ec_mode: str = "basic"
    detectors: int = 1
    seed: int = 0
    trials: int = 1000
    ec_cycle_time: float = 1.0
    fixed_n: int | None = None
    sweep: tuple[SweepAxis, ...] = field(default_factory=tuple)
    records_path: str | None = None
    summary_path: str | None = None

    def with_values(self, **kw) -> "ExperimentConfig":
        return replace(self, **kw)


_FIELD_NAMES = tuple(f.name for f in fields(ExperimentConfig))


def _key_line(raw: str, key: str) -> int | None:
    needle = f'"{key}"'
    for i, line in enumerate(raw.splitlines(), start=1):
        if needle in line:
            return i
    return None


def _validate_sweep(value, raw="", path=None):
    def err(msg, key="sweep"):
        raise ConfigError(key, msg, _key_line(raw, "sweep"), path)
    if not isinstance(value, list):
        err("must be a list of axes")
    if len(value) > 2:
        err("at most 2 sweep axes are supported")
    axes = []
    for ax in value:
        if not isinstance(ax, dict) or set(ax) != {"parameter", "values"}:
            err("each axis needs exactly the keys 'parameter' and 'values'")
        param, values = ax["parameter"], ax["values"]
        if param not in SWEEPABLE:
            err(f"axis parameter {param!r} is not a sweepable numeric key")
        if not isinstance(values, list) or not values:
            err("axis values must be a nonempty list")
        check = _VALIDATORS[param]
        for v in values:
            ok, msg = check(v)
            if not ok:
                raise ConfigError(param, f"sweep value {v!r} {msg}",
                                  _key_line(raw, "sweep"), path)
        axes.append(SweepAxis(param, tuple(values)))
    return tuple(axes)


def _coerce(data: dict, raw: str = "", path: str | None = None) -> dict:
    out = {}
    for key, value in data.items():
        line = _key_line(raw, key)
        if key not in _FIELD_NAMES:
            raise ConfigError(key, "unknown configuration key", line, path)
        if key == "sweep":
            out[key] = _validate_sweep(value, raw, path)
            continue
        ok, msg = _VALIDATORS[key](value)
        if not ok:
            raise ConfigError(key, f"value {value!r} {msg}", line, path)
        out[key] = value
    return out


def env_overrides(environ=None) -> dict:
    """Collect DISTQEC_<KEY> overrides; values are parsed as JSON (bare
    strings fall back to their literal text)."""
    environ = os.environ if environ is None else environ
    found = {}
    for key in _FIELD_NAMES:
        raw = environ.get(ENV_PREFIX + key.upper())
        if raw is None:
            continue
        try:
            found[key] = json.loads(raw)
        except json.JSONDecodeError:
            found[key] = raw
    return found


def load_config(path: str | None = None, overrides: dict | None = None,
                environ=None) -> ExperimentConfig:
    """Build a validated config from file < environment < explicit overrides
    (rightmost wins)."""
    merged = {}
    raw = ""
    if path is not None:
        try:
            with open(path) as fh:
                raw = fh.read()
            data = json.loads(raw)
        except OSError as e:
            raise ConfigError("<file>", f"cannot read: {e}", path=path) from e
        except json.JSONDecodeError as e:
            raise ConfigError("<file>", f"invalid JSON: {e.msg}",
                              line=e.lineno, path=path) from e
        if not isinstance(data, dict):
            raise ConfigError("<file>", "top level must be an object",
                              path=path)
        merged.update(_coerce(data, raw, path))
    merged.update(_coerce(env_overrides(environ)))
    if overrides:
        merged.update(_coerce(overrides))
    return ExperimentConfig(**merged)


def expand_sweep(config: ExperimentConfig):
    """Cross-product of sweep axes; yields (cell values dict, cell config)
    in deterministic row-major order."""
    axes = config.sweep
    if not axes:
        yield {}, config.with_values(sweep=())
        return
    def rec(i, chosen):
        if i == len(axes):
            yield dict(chosen), config.with_values(sweep=(), **dict(chosen))
            return
        for v in axes[i].values:
            yield from rec(i + 1, chosen + [(axes[i].parameter, v)])
    yield from rec(0, [])
