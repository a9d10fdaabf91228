"""Unit tests for the circuit IR and its text format."""

import pytest

from distqec.circuit import Circuit, CircuitError, Cond, Gate, Measure, Reset


def build_sample():
    c = Circuit(3)
    c.reset(0)
    c.gate("H", 0)
    c.gate("CNOT", 0, 1)
    c.mz(1, "r1")
    c.cond("r1", "X", 2)
    c.mz(0, "r2")
    c.cond(("r1", "r2"), "Z", 2)
    return c


def test_builders_and_validate():
    c = build_sample()
    c.validate()
    assert len(c.steps) == 7
    assert isinstance(c.steps[0], Reset)
    assert isinstance(c.steps[1], Gate)
    assert isinstance(c.steps[3], Measure)
    assert isinstance(c.steps[4], Cond)


def test_fault_locations_covers_all_steps():
    c = build_sample()
    assert list(c.fault_locations) == list(range(7))


def test_text_round_trip():
    c = build_sample()
    text = c.to_text()
    again = Circuit.from_text(text)
    assert again.to_text() == text
    assert again.n_qubits == 3
    assert len(again.steps) == len(c.steps)


def test_text_format_lines():
    text = build_sample().to_text()
    lines = text.strip().splitlines()
    assert lines[0] == "QUBITS 3"
    assert "H 0" in lines
    assert "CNOT 0 1" in lines
    assert "MZ 1 -> r1" in lines
    assert "COND r1 X 2" in lines
    assert any(line.startswith("COND parity(r1,r2)") for line in lines)


def test_from_text_ignores_comments_and_blanks():
    c = Circuit.from_text("""
    # a comment
    QUBITS 2

    H 0
    # another
    CNOT 0 1
    """)
    assert len(c.steps) == 2


def test_validate_rejects_bad_circuits():
    c = Circuit(2)
    c.gate("CNOT", 0, 0)
    with pytest.raises(CircuitError):
        c.validate()

    c = Circuit(2)
    c.gate("H", 5)
    with pytest.raises(CircuitError):
        c.validate()

    c = Circuit(2)
    c.gate("H", 0, 1)          # wrong arity
    with pytest.raises(CircuitError):
        c.validate()

    c = Circuit(2)
    c.cond("r_missing", "X", 0)  # conditioned on a record never measured
    with pytest.raises(CircuitError):
        c.validate()


def test_step_support():
    c = build_sample()
    assert c.steps[2].support == (0, 1)
    assert c.steps[3].support == (1,)
