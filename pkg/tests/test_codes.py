"""Unit tests for the code registry, decoding, encoding and basic
syndrome extraction."""

import itertools

import numpy as np
import pytest

from distqec.codes import (DecodeError, decode_lookup, encode_zero, get_code,
                           list_codes, measure_operator_with_ancilla,
                           extract_syndrome_basic, preparation_circuit,
                           reduce_logical)
from distqec.executor import Executor
from distqec.pauli import PauliOperator
from distqec.statevector import StateVector
from distqec.tableau import StabilizerTableau


def test_registry():
    assert set(list_codes()) == {"513", "steane713", "bitflip3",
                                 "phaseflip3", "trivial"}
    with pytest.raises(KeyError):
        get_code("nope")


@pytest.mark.parametrize("name", list_codes())
def test_code_consistency(name):
    code = get_code(name)
    assert len(code.generators) == code.n - code.k
    # generators commute pairwise and with the logicals
    for a, b in itertools.combinations(code.generators, 2):
        assert a.commutes(b)
    for g in code.generators:
        for l in (*code.logical_x, *code.logical_z):
            assert g.commutes(l)
    # logical X and Z anticommute
    assert not code.logical_x[0].commutes(code.logical_z[0])


def test_513_distance():
    code = get_code("513")
    # no weight<=2 logical operator: every syndrome-free weight<=2 Pauli
    # is in the stabilizer group
    for w in (1, 2):
        for qubits in itertools.combinations(range(5), w):
            for kinds in itertools.product("XYZ", repeat=w):
                p = PauliOperator.identity(5)
                for q, k in zip(qubits, kinds):
                    p = p * PauliOperator.single(5, q, k)
                if code.syndrome_of(p) == (0, 0, 0, 0):
                    assert code.in_stabilizer_group(p)


def test_513_syndromes_distinct_and_decode():
    code = get_code("513")
    seen = {}
    for q in range(5):
        for k in "XYZ":
            e = PauliOperator.single(5, q, k)
            s = code.syndrome_of(e)
            assert s not in seen
            seen[s] = e
            corr = decode_lookup(s, code)
            # correction must undo the error exactly (up to stabilizer)
            assert code.in_stabilizer_group(corr * e)
    assert len(seen) == 15
    assert decode_lookup((0, 0, 0, 0), code).is_identity()


def test_decode_table_total_and_errors():
    code = get_code("513")
    assert len(code.decode_table) == 16
    with pytest.raises(ValueError):
        decode_lookup((0, 0), code)
    bitflip = get_code("bitflip3")
    assert len(bitflip.decode_table) == 4
    # X-only table never contains Z corrections
    assert all(p.z == 0 for p in bitflip.decode_table.values())


def test_logical_class_and_coset_weight():
    code = get_code("513")
    assert code.logical_class(PauliOperator.identity(5)) == "I"
    assert code.logical_class(code.logical_x[0]) == "X"
    assert code.logical_class(code.logical_z[0]) == "Z"
    assert code.logical_class(code.logical_x[0] * code.logical_z[0]) == "Y"
    assert code.coset_weight(code.logical_x[0]) == 3
    for g in code.generators:
        assert code.coset_weight(g) == 0


def test_reduce_logical_weight():
    code = get_code("513")
    assert reduce_logical(code, "X").weight == 3
    assert reduce_logical(code, "Z").weight == 3
    assert code.logical_class(reduce_logical(code, "Z")) == "Z"
    assert code.logical_class(reduce_logical(code, "X")) == "X"
    with pytest.raises(ValueError):
        reduce_logical(code, "Y")


@pytest.mark.parametrize("name", list_codes())
def test_encode_zero_stabilizes(name):
    code = get_code(name)
    circ = encode_zero(name)
    circ.validate()
    t = StabilizerTableau(code.n)
    ex = Executor(t, rng=np.random.default_rng(0))
    ex.run_circuit(circ)
    for target in (*code.generators, *code.logical_z):
        assert t.peek_observable(target) == 1


def test_encode_zero_matches_dense_oracle():
    code = get_code("513")
    sv = StateVector(5)
    ex = Executor(sv, rng=np.random.default_rng(0))
    ex.run_circuit(encode_zero("513"))
    for target in (*code.generators, *code.logical_z):
        assert sv.branch_probability(target, 1) == pytest.approx(1.0)


def test_preparation_circuit_rejects_dependent_targets():
    with pytest.raises(ValueError):
        preparation_circuit(
            [PauliOperator.from_string("ZZ"),
             PauliOperator.from_string("-ZZ")], 2)
    with pytest.raises(ValueError):
        preparation_circuit([PauliOperator.from_string("Z")], 2)


def test_preparation_circuit_random_targets():
    """Synthesize random full stabilizer groups and check the circuit
    prepares exactly the requested signed generators."""
    rng = np.random.default_rng(17)
    for _ in range(15):
        n = int(rng.integers(2, 5))
        # build a random target set by conjugating {Z_j} through a random
        # Clifford circuit on the tableau
        t = StabilizerTableau(n)
        for _ in range(20):
            r = rng.random()
            if r < 0.5:
                t.apply(("H", "S", "X")[int(rng.integers(3))],
                        int(rng.integers(n)))
            elif n > 1:
                a, b = map(int, rng.choice(n, size=2, replace=False))
                t.apply("CNOT", a, b)
        targets = list(t.stabilizer_rows())
        circ = preparation_circuit(targets, n)
        fresh = StabilizerTableau(n)
        ex = Executor(fresh, rng=np.random.default_rng(0))
        ex.run_circuit(circ)
        for target in targets:
            assert fresh.peek_observable(target) == 1


def test_measure_operator_with_ancilla():
    code = get_code("513")
    t = StabilizerTableau(6)
    ex = Executor(t, rng=np.random.default_rng(0))
    ex.run_circuit(encode_zero("513"), qubit_map=tuple(range(5)))
    for g in code.generators:
        assert measure_operator_with_ancilla(ex, g, tuple(range(5)), 5) == 1
    assert measure_operator_with_ancilla(
        ex, code.logical_z[0], tuple(range(5)), 5) == 1


def test_extract_syndrome_basic_localizes_errors():
    code = get_code("513")
    for q in range(5):
        for k in "XYZ":
            t = StabilizerTableau(6)
            ex = Executor(t, rng=np.random.default_rng(0))
            ex.run_circuit(encode_zero("513"), qubit_map=tuple(range(5)))
            err = PauliOperator.single(5, q, k)
            t.apply_pauli(err.embed(6, tuple(range(5))))
            rec = extract_syndrome_basic(ex, code, tuple(range(5)), 5)
            assert rec.bits == code.syndrome_of(err)
            corr = decode_lookup(rec, code)
            assert code.in_stabilizer_group(corr * err)


def test_stabilizer_elements_signs_exact():
    code = get_code("513")
    elements = list(code.stabilizer_elements())
    assert len(elements) == 16
    # exact group: product of any two elements is again in the list
    as_set = {(e.x, e.z, e.phase_exp) for e in elements}
    for a in elements[:4]:
        for b in elements[:4]:
            p = a * b
            assert (p.x, p.z, p.phase_exp) in as_set
