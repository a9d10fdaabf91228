"""Unit tests for summary statistics."""

import math

import pytest

from distqec.distnet import LinkChannel, run_trials
from distqec.stats import loglog_slope, summarize, wilson_interval


def test_wilson_interval_basic():
    lo, hi = wilson_interval(0, 100)
    assert lo == pytest.approx(0.0, abs=1e-12) and 0 < hi < 0.05
    lo, hi = wilson_interval(50, 100)
    assert lo < 0.5 < hi
    lo, hi = wilson_interval(100, 100)
    assert 0.95 < lo < 1.0 and hi == 1.0
    with pytest.raises(ValueError):
        wilson_interval(1, 0)
    with pytest.raises(ValueError):
        wilson_interval(5, 4)


def test_wilson_interval_covers_known_value():
    # classic reference point: 10/100 with z=1.96 -> (0.0552, 0.1744)
    lo, hi = wilson_interval(10, 100)
    assert lo == pytest.approx(0.0552, abs=2e-3)
    assert hi == pytest.approx(0.1744, abs=2e-3)


def test_summarize_over_records():
    recs = run_trials(LinkChannel(p_success=0.5), "513", 20, seed=0)
    s = summarize(recs)
    assert s.n_trials == 20
    assert s.n_completed == 20 - s.heralded_aborts
    assert s.logical_errors == 0 and s.logical_error_rate == 0.0
    assert s.wilson_low == 0.0 and s.wilson_high > 0
    assert s.mean_wait > 0 and s.p90_wait >= s.mean_wait * 0.5
    assert sum(s.retry_histogram.values()) == 20
    d = s.to_dict()
    assert d["n_trials"] == 20 and isinstance(d["retry_histogram"], dict)
    with pytest.raises(ValueError):
        summarize([])


def test_loglog_slope_exact_power_law():
    xs = [1e-3, 3e-3, 1e-2]
    ys = [5 * x ** 2 for x in xs]
    assert loglog_slope(xs, ys) == pytest.approx(2.0)
    ys = [0.7 * x for x in xs]
    assert loglog_slope(xs, ys) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        loglog_slope([1.0], [1.0])
    with pytest.raises(ValueError):
        loglog_slope([1.0, 2.0], [0.0, 1.0])
