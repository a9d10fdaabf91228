"""Unit tests for the step executor: locations, fault injection, noise
statistics, and record handling."""

import numpy as np
import pytest

from distqec.circuit import Circuit
from distqec.executor import Executor, FaultSpec
from distqec.noise import ErrorModel
from distqec.pauli import PauliOperator
from distqec.tableau import StabilizerTableau


def test_records_and_parity():
    c = Circuit(2)
    c.gate("H", 0)
    c.gate("CNOT", 0, 1)
    c.mz(0, "a")
    c.mz(1, "b")
    ex = Executor(StabilizerTableau(2), rng=np.random.default_rng(0))
    records = ex.run_circuit(c)
    assert records["a"] == records["b"]
    assert ex.parity(("a", "b")) == 0


def test_location_counter_counts_every_step():
    c = Circuit(2)
    c.reset(0)
    c.gate("H", 0)
    c.mz(0, "r")
    c.cond("r", "X", 1)
    ex = Executor(StabilizerTableau(2), rng=np.random.default_rng(0))
    ex.trace = []
    ex.run_circuit(c)
    assert ex.location == 4
    assert len(ex.trace) == 4


def test_cond_location_stable_across_branches():
    """The location index after a conditional is the same whether or not
    the conditional fired, so fault locations are comparable."""
    locs = []
    for force in (0.0, 0.99):  # uniform driving the H-measurement outcome
        c = Circuit(2)
        c.gate("H", 0)
        c.mz(0, "r")
        c.cond("r", "X", 1)
        c.gate("Z", 1)
        ex = Executor(StabilizerTableau(2), uniforms=[force])
        ex.run_circuit(c)
        locs.append(ex.location)
    assert locs[0] == locs[1] == 4


def test_fault_injection_after_gate():
    # X fault on qubit 1 right after the CNOT: flips the Bell correlation
    c = Circuit(2)
    c.gate("H", 0)
    c.gate("CNOT", 0, 1)
    ex = Executor(StabilizerTableau(2), rng=np.random.default_rng(0),
                  fault=FaultSpec(1, ("I", "X")))
    ex.run_circuit(c)
    assert ex.fault_fired
    assert ex.state.peek_observable(PauliOperator.from_string("ZZ")) == -1


def test_fault_before_measurement():
    c = Circuit(1)
    c.mz(0, "r")
    ex = Executor(StabilizerTableau(1), fault=FaultSpec(0, ("X",)))
    records = ex.run_circuit(c)
    assert records["r"] == 1  # fault applied before readout


def test_fault_fires_once():
    ex = Executor(StabilizerTableau(1), fault=FaultSpec(0, ("X",)))
    ex.apply_gate("Z", 0)
    ex.apply_gate("Z", 0)  # same-location spec must not re-fire
    assert ex.fault_fired
    assert ex.measure_z(0) == -1


def test_uniforms_pin_measurement_branches():
    for u, expected in ((0.2, 1), (0.9, -1)):
        ex = Executor(StabilizerTableau(1), uniforms=[u])
        ex.apply_gate("H", 0)
        assert ex.measure_z(0) == expected
    ex = Executor(StabilizerTableau(1), uniforms=[])
    ex.apply_gate("H", 0)
    with pytest.raises(ValueError):
        ex.measure_z(0)


def test_measurement_flip_noise():
    ex = Executor(StabilizerTableau(1), noise=ErrorModel(p_meas=1.0))
    assert ex.measure_z(0, "r") == -1  # |0> reads -1 under certain flip
    assert ex.records["r"] == 1
    assert ex.state.measure_z(0) == (1, True)  # state itself untouched


def test_gate_noise_statistics():
    """Geometric skip counting must reproduce Bernoulli(p) marginals."""
    p = 0.1
    n_checks = 20000
    ex = Executor(StabilizerTableau(1), rng=np.random.default_rng(123),
                  noise=ErrorModel(p1=p))
    ex.noise_log = []
    for _ in range(n_checks):
        ex.apply_gate("H", 0)
    rate = len(ex.noise_log) / n_checks
    sigma = (p * (1 - p) / n_checks) ** 0.5
    assert abs(rate - p) < 5 * sigma
    kinds = {k for _, _, k in ex.noise_log}
    assert kinds <= {"X", "Y", "Z"} and len(kinds) == 3


def test_two_qubit_noise_statistics():
    p = 0.2
    n_checks = 5000
    ex = Executor(StabilizerTableau(2), rng=np.random.default_rng(5),
                  noise=ErrorModel(p2=p))
    ex.noise_log = []
    for _ in range(n_checks):
        ex.apply_gate("CNOT", 0, 1)
    rate = len(ex.noise_log) / n_checks
    sigma = (p * (1 - p) / n_checks) ** 0.5
    assert abs(rate - p) < 5 * sigma
    assert all(len(k) == 2 for _, _, k in ex.noise_log)
    assert "II" not in {k for _, _, k in ex.noise_log}


def test_idle_memory_noise():
    ex = Executor(StabilizerTableau(2), rng=np.random.default_rng(9),
                  noise=ErrorModel(p_mem=1.0))
    ex.noise_log = []
    ex.idle((0, 1))
    # p_mem=1: X and Z on each idle qubit
    assert len(ex.noise_log) == 4
    assert ex.location == 1


def test_noiseless_run_is_deterministic_given_seed():
    def run(seed):
        ex = Executor(StabilizerTableau(3), rng=np.random.default_rng(seed),
                      noise=ErrorModel.uniform(0.05))
        c = Circuit(3)
        for q in range(3):
            c.gate("H", q)
        for q in range(3):
            c.mz(q, f"r{q}")
        return dict(ex.run_circuit(c))
    assert run(42) == run(42)


def test_reset_noise_uses_p1():
    ex = Executor(StabilizerTableau(1), rng=np.random.default_rng(1),
                  noise=ErrorModel(p1=1.0))
    ex.noise_log = []
    ex.reset(0)
    assert len(ex.noise_log) == 1


def test_qubit_map_relocation():
    c = Circuit(2)
    c.gate("H", 0)
    c.gate("CNOT", 0, 1)
    ex = Executor(StabilizerTableau(4), rng=np.random.default_rng(0))
    ex.run_circuit(c, qubit_map=(2, 3))
    assert ex.state.peek_observable(PauliOperator.from_string("IIXX")) == 1
    assert ex.state.peek_observable(PauliOperator.from_string("ZIII")) == 1
