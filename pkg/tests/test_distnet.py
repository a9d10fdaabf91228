"""Unit tests for the two-node network model: ledgers, timeline,
multiplexer, heralded links, and timed trials."""

import numpy as np
import pytest

from distqec.distnet import (EventTimeline, LinkChannel, MultiplexerState,
                             attempt_bell_link, draw_link_error,
                             geometric_attempts, node_preset, run_timed_bell_prep,
                             run_trials)


def test_node_ledgers():
    assert node_preset("513-basic").ledger_total == 7
    assert node_preset("513-ft-local").ledger_total == 10
    assert node_preset("513-ft").ledger_total == 14
    assert node_preset("steane-chip").ledger_total == 39
    spec = node_preset("513-ft", node_id="alice")
    assert spec.node_id == "alice" and spec.code_name == "513"
    assert (spec.data_qubits, spec.local_ancilla, spec.interface_qubits) \
        == (5, 5, 4)
    with pytest.raises(KeyError):
        node_preset("mystery")


def test_link_channel_validation():
    with pytest.raises(ValueError):
        LinkChannel(p_success=0.0)
    with pytest.raises(ValueError):
        LinkChannel(p_success=0.5, t_attempt=0)
    with pytest.raises(ValueError):
        LinkChannel(p_success=0.5, bell_error=2.0)


def test_event_timeline_order_and_clock():
    tl = EventTimeline()
    tl.schedule(5.0, "late")
    tl.schedule(1.0, "early")
    tl.schedule(1.0, "early2")  # FIFO at equal times
    assert tl.advance() == (1.0, "early")
    assert tl.advance() == (1.0, "early2")
    assert tl.current_time == 1.0
    with pytest.raises(ValueError):
        tl.schedule(0.5, "past")
    assert tl.advance() == (5.0, "late")
    with pytest.raises(IndexError):
        tl.advance()
    assert len(tl) == 0


def test_multiplexer_queues_and_promotes():
    mux = MultiplexerState({"a": 1, "b": 1, "c": 1}, detectors=1)
    assert mux.schedule_pair("a", "b")
    # detector busy: queued, not dropped
    assert not mux.schedule_pair("a", "c")
    assert not mux.schedule_pair("b", "c")
    promoted = mux.release_pair("a", "b")
    # FIFO: (a, c) goes first; (b, c) must wait for the lone detector
    assert promoted == [("a", "c")]
    assert list(mux.waiting) == [("b", "c")]
    assert mux.release_pair("a", "c") == [("b", "c")]


def test_multiplexer_respects_interface_budget():
    mux = MultiplexerState({"a": 1, "b": 2}, detectors=5)
    assert mux.schedule_pair("a", "b")
    # node a has no free interface qubit left
    assert not mux.schedule_pair("a", "b")


def test_geometric_attempts_moments():
    p = 0.25
    rng = np.random.default_rng(0)
    draws = [geometric_attempts(p, rng.random()) for _ in range(200000)]
    assert min(draws) == 1
    assert np.mean(draws) == pytest.approx(1 / p, rel=0.02)
    assert geometric_attempts(1.0, 0.999) == 1


def test_draw_link_error():
    rng = np.random.default_rng(1)
    assert draw_link_error(0.0, rng) is None
    seen = {str(draw_link_error(1.0, rng)) for _ in range(300)}
    assert len(seen) == 15 and "+II" not in seen


def test_attempt_bell_link_schedules_delivery():
    tl = EventTimeline()
    ch = LinkChannel(p_success=0.5, t_attempt=2.0)
    ev = attempt_bell_link(ch, ("a", "b"), np.random.default_rng(2), tl)
    assert ev.delivery_time == ev.attempts * 2.0
    t, payload = tl.advance()
    assert t == ev.delivery_time
    assert payload == ("bell_delivered", ("a", "b"), ev)


def test_run_timed_bell_prep_noiseless_basic():
    ch = LinkChannel(p_success=0.3, t_attempt=1.0)
    rec = run_timed_bell_prep(ch, "513", np.random.default_rng(3))
    assert not rec.heralded_abort and not rec.logical_error
    assert rec.eigenvalue in (1, -1)
    assert rec.n_ec_cycles == int(rec.wait_time)  # ec_cycle_time = 1
    assert rec.bell_links_used == 1
    assert len(rec.syndrome_history) == rec.n_ec_cycles
    assert all(s == (0,) * 8 for s in rec.syndrome_history)


def test_run_timed_bell_prep_ft_mode():
    ch = LinkChannel(p_success=0.8)
    rec = run_timed_bell_prep(ch, "513", np.random.default_rng(4),
                              ec_mode="ft", fixed_n=1)
    assert not rec.heralded_abort and not rec.logical_error
    assert rec.ec_mode == "ft" and rec.n_ec_cycles == 1
    assert rec.bell_links_used >= 4
    with pytest.raises(ValueError):
        run_timed_bell_prep(ch, "513", np.random.default_rng(0),
                            ec_mode="weird")


def test_run_trials_deterministic_and_independent():
    ch = LinkChannel(p_success=0.5)
    a = run_trials(ch, "513", 5, seed=7)
    b = run_trials(ch, "513", 5, seed=7)
    assert [r.to_dict() for r in a] == [r.to_dict() for r in b]
    c = run_trials(ch, "513", 5, seed=8)
    assert [r.wait_time for r in a] != [r.wait_time for r in c]
    # per-trial streams: the first trials of longer batches are identical
    d = run_trials(ch, "513", 2, seed=7)
    assert [r.to_dict() for r in d] == [r.to_dict() for r in a[:2]]


def test_mean_delivery_time_matches_geometry():
    """Mean wait converges to t_attempt / p_success."""
    ch = LinkChannel(p_success=0.2, t_attempt=3.0)
    recs = run_trials(ch, "trivial", 4000, seed=1, fixed_n=0)
    mean = np.mean([r.wait_time for r in recs])
    assert mean == pytest.approx(3.0 / 0.2, rel=0.05)


def test_trial_record_serialization():
    ch = LinkChannel(p_success=1.0)
    rec = run_timed_bell_prep(ch, "513", np.random.default_rng(0))
    d = rec.to_dict()
    assert d["heralded_abort"] is False
    assert isinstance(d["syndrome_history"], list)
    assert set(d) >= {"trial_index", "wait_time", "link_attempts",
                      "eigenvalue", "logical_error", "elapsed_time"}
