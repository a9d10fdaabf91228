"""Gate-by-measurement constructions.

Three protocols built from operator measurements:
  - CZ between two qubits using one ancilla in |+> and measurements of
    Z.I.Z and I.Z.X, with Pauli fixups for -1 outcomes;
  - joint measurement of a logical operator pair across two blocks using
    one Bell pair as transversal control;
  - non-fault-tolerant encoded Bell-state preparation (encode |0>_L twice,
    local EC cycles, measure XbarXbar, frame-correct with Zbar).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .codes import (StabilizerCode, apply_pauli_gates, decode_lookup,
                    encode_zero, extract_syndrome_basic, _controlled_factor)
from .executor import Executor
from .pauli import PauliOperator


@dataclass(frozen=True)
class MeasurementOutcomeFrame:
    eigenvalue: int
    applied_correction: PauliOperator | None = None


@dataclass(frozen=True)
class JointMeasurementPlan:
    """Transversal coupling of one Bell pair onto two data blocks."""
    operator_a: PauliOperator          # on block-local indices
    operator_b: PauliOperator
    block_a: tuple[int, ...]           # global qubit indices
    block_b: tuple[int, ...]
    bell: tuple[int, int]              # (half in node A, half in node B)

    def __post_init__(self):
        if len(self.block_a) != self.operator_a.n_qubits:
            raise ValueError("operator A does not fit block A")
        if len(self.block_b) != self.operator_b.n_qubits:
            raise ValueError("operator B does not fit block B")
        for op in (self.operator_a, self.operator_b):
            if op.sign not in (1, -1):
                raise ValueError("plan operators must have sign +/-1")

    def couplings(self):
        """(factor, control, target) triples, ascending qubit order."""
        out = []
        for op, block, half in ((self.operator_a, self.block_a, self.bell[0]),
                                (self.operator_b, self.block_b, self.bell[1])):
            for local in op.support:
                out.append((op.factor(local), half, block[local]))
        return out


def cz_by_measurement(state, a: int, b: int, anc: int, rng=None, forces=None):
    """Enact CZ on (a, b) via operator measurements with ancilla `anc`.

    The ancilla must be in |+>.  `forces` optionally pins the three
    measurement outcomes (branch enumeration in tests).  Returns a
    MeasurementOutcomeFrame whose correction records the conditional Z_b.
    """
    n = state.n_qubits
    f1, f2, f3 = forces if forces is not None else (None, None, None)
    m1 = PauliOperator.single(n, a, "Z") * PauliOperator.single(n, anc, "Z")
    m2 = PauliOperator.single(n, b, "Z") * PauliOperator.single(n, anc, "X")
    s1, _ = state.measure_pauli(m1, rng=rng, force=f1)
    if s1 == -1:
        state.apply("X", anc)
    s2, _ = state.measure_pauli(m2, rng=rng, force=f2)
    if s2 == -1:
        state.apply("Z", a)
    s3, _ = state.measure_z(anc, rng=rng, force=f3)
    correction = None
    if s3 == -1:
        state.apply("Z", b)
        correction = PauliOperator.single(n, b, "Z")
    return MeasurementOutcomeFrame(s3, correction), (s1, s2, s3)


def measure_joint_logical(ex: Executor, plan: JointMeasurementPlan,
                          record_prefix: str = "jm") -> int:
    """Measure operator_a (x) operator_b using the plan's Bell pair.

    Transversal controlled-Paulis from each Bell half onto its own block,
    Hadamard on both halves, computational measurement; even parity of the
    two records projects onto the +1 eigenspace.  The Bell pair is consumed.
    """
    h_a, h_b = plan.bell
    for factor, control, target in plan.couplings():
        _controlled_factor(ex, factor, control, target)
    ex.apply_gate("H", h_a)
    ex.apply_gate("H", h_b)
    ja = ex.measure_z(h_a, f"{record_prefix}_a")
    jb = ex.measure_z(h_b, f"{record_prefix}_b")
    parity_eig = 1 if ja == jb else -1
    # couplings realize the Hermitian string of each operator; fold the
    # representatives' +/-1 signs back in so the reported eigenvalue is that
    # of the exact operators
    return parity_eig * int(plan.operator_a.sign.real * plan.operator_b.sign.real)


@dataclass(frozen=True)
class BellPrepLayout:
    """Global qubit indices for the two-node Bell preparation."""
    data_a: tuple[int, ...]
    data_b: tuple[int, ...]
    anc_a: int
    anc_b: int
    bell: tuple[int, int]


def standard_layout(code: StabilizerCode) -> BellPrepLayout:
    n = code.n
    return BellPrepLayout(
        data_a=tuple(range(n)),
        data_b=tuple(range(n, 2 * n)),
        anc_a=2 * n,
        anc_b=2 * n + 1,
        bell=(2 * n + 2, 2 * n + 3))


def required_qubits(code: StabilizerCode) -> int:
    return 2 * code.n + 4


def make_bell_link(ex: Executor, h_a: int, h_b: int,
                   error: PauliOperator | None = None):
    """Fresh Bell pair (|00>+|11>)/sqrt(2) on the two halves; optional
    delivered-pair Pauli error applied after heralding."""
    ex.reset(h_a)
    ex.reset(h_b)
    ex.apply_gate("H", h_a)
    ex.apply_gate("CNOT", h_a, h_b)
    if error is not None and not error.is_identity():
        ex.state.apply_pauli(error.embed(ex.state.n_qubits, (h_a, h_b)))


def ec_cycle_basic(ex: Executor, code: StabilizerCode,
                   data: tuple[int, ...], ancilla: int, repetition: int = 0):
    """One basic EC cycle: sequential syndrome, lookup decode, correct."""
    rec = extract_syndrome_basic(ex, code, data, ancilla, repetition)
    correction = decode_lookup(rec, code)
    if not correction.is_identity():
        apply_pauli_gates(ex, correction, data)
    return rec


def prepare_encoded_bell_nonft(ex: Executor, code: StabilizerCode,
                               layout: BellPrepLayout | None = None,
                               n_ec_cycles: int = 0,
                               link_error: PauliOperator | None = None):
    """Non-FT preparation of (|0>_L|0>_L + |1>_L|1>_L)/sqrt(2).

    Encodes both blocks, runs `n_ec_cycles` basic EC cycles per node, makes
    a Bell link, measures XbarXbar through it and applies Zbar on node B
    for odd parity.  Returns the MeasurementOutcomeFrame of the joint
    measurement.
    """
    if layout is None:
        layout = standard_layout(code)
    enc = encode_zero(code.name)
    ex.run_circuit(enc, qubit_map=layout.data_a)
    ex.run_circuit(enc, qubit_map=layout.data_b)
    for cycle in range(n_ec_cycles):
        ec_cycle_basic(ex, code, layout.data_a, layout.anc_a, cycle)
        ec_cycle_basic(ex, code, layout.data_b, layout.anc_b, cycle)
    make_bell_link(ex, *layout.bell, error=link_error)
    plan = JointMeasurementPlan(code.logical_x[0], code.logical_x[0],
                                layout.data_a, layout.data_b, layout.bell)
    eig = measure_joint_logical(ex, plan, "bellprep")
    correction = None
    if eig == -1:
        correction = code.logical_z[0]
        apply_pauli_gates(ex, correction, layout.data_b)
    return MeasurementOutcomeFrame(eig, correction)
