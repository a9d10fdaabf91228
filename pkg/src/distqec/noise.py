"""Pauli error models and fault-injection engines.

Two engines: stochastic circuit-level noise (`apply_stochastic_noise`
rewrites a circuit with sampled Pauli faults interleaved) and exhaustive
single-fault enumeration over static circuits or adaptive protocols.
Campaigns report verification outcomes, residual data-error weight
(noiseless syndrome readback + coset reduction) and a logical-error flag,
and export as CSV.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .circuit import Circuit, Cond, Gate, Measure, Reset
from .codes import (StabilizerCode, decode_lookup, get_code,
                    preparation_circuit)
from .executor import _ONE_QUBIT_FAULTS, _TWO_QUBIT_FAULTS, Executor, FaultSpec
from .fault_tolerance import (ec_cycle_ft, ghz_prep_once, interface_prep_once)
from .pauli import PauliOperator
from .tableau import StabilizerTableau


@dataclass(frozen=True)
class ErrorModel:
    """Circuit-level Pauli noise rates; the zero model is the noiseless
    identity."""
    p1: float = 0.0        # per 1-qubit gate/reset, uniform X/Y/Z
    p2: float = 0.0        # per 2-qubit gate, uniform over 15 pairs
    p_meas: float = 0.0    # measurement record flip
    p_mem: float = 0.0     # per idle tick per qubit, independent X and Z
    bell_error: float = 0.0  # delivered Bell pair, uniform 2-qubit Pauli

    def __post_init__(self):
        for name in ("p1", "p2", "p_meas", "p_mem", "bell_error"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name}={v} outside [0, 1]")

    @classmethod
    def uniform(cls, p: float) -> "ErrorModel":
        """All stochastic rates tied to a single physical rate p."""
        return cls(p1=p, p2=p, p_meas=p, p_mem=p, bell_error=p)

    def is_zero(self) -> bool:
        return not any((self.p1, self.p2, self.p_meas, self.p_mem,
                        self.bell_error))


def bell_error_fn(model: ErrorModel | None):
    """Pauli-twirled link infidelity: with probability bell_error a uniform
    nonidentity two-qubit Pauli afflicts the delivered pair.  Returns a
    sampler usable as `link_error_fn` (draws from the executor's stream)."""
    if model is None or model.bell_error == 0:
        return None

    def draw(ex: Executor):
        if ex.random() < model.bell_error:
            pair = _TWO_QUBIT_FAULTS[int(ex.random() * 15) % 15]
            return PauliOperator.from_string("".join(pair))
        return None
    return draw


def apply_stochastic_noise(circuit: Circuit, model: ErrorModel,
                           rng: np.random.Generator) -> Circuit:
    """Sampled noisy instance of `circuit`: same gate sequence with Pauli
    fault gates interleaved.  Measurement record flips appear as an X
    sandwich around the measurement so the post-measurement state stays
    consistent with the flipped record."""
    noisy = Circuit(circuit.n_qubits)
    for step in circuit.steps:
        if isinstance(step, Measure):
            flip = model.p_meas > 0 and rng.random() < model.p_meas
            if flip:
                noisy.gate("X", step.qubit)
            noisy.steps.append(step)
            if flip:
                noisy.gate("X", step.qubit)
            continue
        noisy.steps.append(step)
        if isinstance(step, Gate) and len(step.qubits) == 2:
            if model.p2 > 0 and rng.random() < model.p2:
                pair = _TWO_QUBIT_FAULTS[int(rng.random() * 15) % 15]
                for q, kind in zip(step.qubits, pair):
                    if kind != "I":
                        noisy.gate(kind, q)
        elif isinstance(step, (Gate, Reset)):
            if model.p1 > 0 and rng.random() < model.p1:
                kind = _ONE_QUBIT_FAULTS[int(rng.random() * 3) % 3]
                noisy.gate(kind, step.support[0])
    return noisy


# -- residual-error analysis -------------------------------------------------

def residual_error(state, code: StabilizerCode, data: tuple[int, ...],
                   basis: str = "0"):
    """Minimal residual error on a data block that ideally holds |0>_L
    (basis "0") or |+>_L (basis "+").

    Peeks the syndrome and the state's fixed logical (Zbar for |0>_L, Xbar
    for |+>_L), reconstructs the error coset modulo the stabilizer group
    and the fixed logical (which stabilizes the ideal state), and returns
    (weight, logical_error): the coset minimum weight and whether the fixed
    logical's eigenvalue is flipped.
    """
    if basis not in ("0", "+"):
        raise ValueError("basis must be '0' or '+'")
    n_total = state.n_qubits
    bits = []
    for g in code.generators:
        v = state.peek_observable(g.embed(n_total, data))
        if v == 0:
            raise ValueError("data block left the stabilizer-definite set")
        bits.append((1 - v) // 2)
    e = decode_lookup(tuple(bits), code)
    fixed = code.logical_z[0] if basis == "0" else code.logical_x[0]
    comp = code.logical_x[0] if basis == "0" else code.logical_z[0]
    s = state.peek_observable(fixed.embed(n_total, data))
    if s == 0:
        raise ValueError("fixed logical is indefinite on the data block")
    if not e.commutes(fixed):
        s = -s
    logical = s == -1
    base = comp * e if logical else e
    best = base.weight
    for element in code.stabilizer_elements():
        cand = base * element
        best = min(best, cand.weight, (cand * fixed).weight)
    return best, logical


def encode_basis_circuit(code: StabilizerCode, basis: str) -> Circuit:
    """Preparation circuit for |0>_L (basis "0") or |+>_L (basis "+")."""
    fixed = code.logical_z if basis == "0" else code.logical_x
    return preparation_circuit(list(code.generators) + list(fixed), code.n)


# -- exhaustive single-fault enumeration -------------------------------------

@dataclass(frozen=True)
class FaultOutcome:
    location: int
    paulis: tuple[str, ...]
    verification_outcome: int       # 0 accepted, 1 caught/odd parity
    residual_weight: int
    logical_error: bool
    detail: str = ""


@dataclass
class FaultCampaign:
    protocol: str
    pauli_set: tuple[str, ...]
    results: list[FaultOutcome] = field(default_factory=list)

    def violations(self) -> list[FaultOutcome]:
        """Faults that both pass verification and corrupt >= 2 data qubits
        (or flip the logical state) -- the fault-tolerance failure set."""
        return [r for r in self.results
                if r.verification_outcome == 0
                and (r.residual_weight >= 2 or r.logical_error)]

    def to_csv(self, path: str):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["fault_location", "fault_pauli",
                        "verification_outcome", "residual_weight",
                        "logical_error", "detail"])
            for r in self.results:
                w.writerow([r.location, ".".join(r.paulis),
                            r.verification_outcome, r.residual_weight,
                            int(r.logical_error), r.detail])


def fault_specs(supports, pauli_set=("X", "Y", "Z"), two_qubit="all"):
    """Deterministically ordered FaultSpecs covering every location once
    per Pauli.  2-qubit supports get all 15 nonidentity pairs ("all") or
    pairs drawn from pauli_set plus identity ("restricted")."""
    for loc, support in enumerate(supports):
        if len(support) == 0:
            continue
        if len(support) == 1:
            for p in pauli_set:
                yield FaultSpec(loc, (p,))
        else:
            if two_qubit == "all":
                pairs = _TWO_QUBIT_FAULTS
            else:
                alphabet = ("I",) + tuple(pauli_set)
                pairs = tuple((a, b) for a in alphabet for b in alphabet
                              if (a, b) != ("I", "I"))
            for pair in pairs:
                yield FaultSpec(loc, pair)


def _traced_supports(n_qubits, protocol) -> list[tuple[int, ...]]:
    """Noiseless run recording every location's support."""
    ex = Executor(StabilizerTableau(n_qubits), rng=np.random.default_rng(0))
    ex.trace = []
    protocol(ex)
    return ex.trace


def enumerate_single_faults(circuit: Circuit, pauli_set=("X", "Y", "Z"),
                            analyze=None, two_qubit="all",
                            name: str = "circuit") -> FaultCampaign:
    """Run `circuit` once per (location, Pauli) with exactly that fault.

    `analyze(executor) -> FaultOutcome fields dict` inspects the final
    state; the default records nothing beyond acceptance.  Deterministic
    and seed-independent (fixed internal seed selects among equivalent
    measurement branches only).
    """
    campaign = FaultCampaign(name, tuple(pauli_set))
    supports = [step.support for step in circuit.steps]
    for spec in fault_specs(supports, pauli_set, two_qubit):
        ex = Executor(StabilizerTableau(circuit.n_qubits),
                      rng=np.random.default_rng(0), fault=spec)
        ex.run_circuit(circuit)
        extra = analyze(ex) if analyze is not None else {}
        campaign.results.append(FaultOutcome(
            location=spec.location, paulis=spec.paulis,
            verification_outcome=extra.get("verification_outcome", 0),
            residual_weight=extra.get("residual_weight", 0),
            logical_error=extra.get("logical_error", False),
            detail=extra.get("detail", "")))
    return campaign


# -- protocol campaigns ------------------------------------------------------

def campaign_ft_syndrome(code_name: str = "513",
                         pauli_set=("X", "Y", "Z"),
                         bases=("0", "+"), two_qubit="all") -> FaultCampaign:
    """Exhaustive single-fault campaign over one FT EC cycle on an
    error-free encoded state, for both logical basis states so X- and
    Z-type residuals are each observable."""
    code = get_code(code_name)
    n = code.n
    ghz_w = max(g.weight for g in code.generators)
    data = tuple(range(n))
    ghz = tuple(range(n, n + ghz_w))
    verifier = n + ghz_w
    nq = verifier + 1

    campaign = FaultCampaign(f"ft-syndrome[{code_name}]", tuple(pauli_set))
    for basis in bases:
        prep = encode_basis_circuit(code, basis)

        def fresh(fault=None):
            ex = Executor(StabilizerTableau(nq),
                          rng=np.random.default_rng(0))
            ex.run_circuit(prep, qubit_map=data)
            ex.fault = fault          # faults only inside the EC cycle
            ex.location = 0
            ex.fault_fired = False
            return ex

        ex0 = fresh()
        ex0.trace = []
        ec_cycle_ft(ex0, code, data, ghz, verifier)
        for spec in fault_specs(ex0.trace, pauli_set, two_qubit):
            ex = fresh(spec)
            ec_cycle_ft(ex, code, data, ghz, verifier)
            weight, logical = residual_error(ex.state, code, data, basis)
            campaign.results.append(FaultOutcome(
                location=spec.location, paulis=spec.paulis,
                verification_outcome=0, residual_weight=weight,
                logical_error=logical, detail=f"basis={basis}"))
    return campaign


def campaign_ghz(width: int = 4, pauli_set=("X",),
                 two_qubit="all") -> FaultCampaign:
    """Single-fault campaign over one GHZ preparation attempt: verifier
    outcome and the block's X-flip count (min over branch relabeling)."""
    ghz = tuple(range(width))
    verifier = width
    nq = width + 1

    def protocol(ex, out):
        snap = {}
        bit = ghz_prep_once(ex, ghz, verifier, inspect=lambda s: snap.update(
            flips=_ghz_flips(s, ghz)))
        out["verification_outcome"] = bit
        out["residual_weight"] = snap["flips"]

    campaign = FaultCampaign(f"ghz{width}", tuple(pauli_set))
    supports = _traced_supports(nq, lambda ex: ghz_prep_once(ex, ghz, verifier))
    for spec in fault_specs(supports, pauli_set, two_qubit):
        ex = Executor(StabilizerTableau(nq), rng=np.random.default_rng(0),
                      fault=spec)
        out = {}
        protocol(ex, out)
        campaign.results.append(FaultOutcome(
            location=spec.location, paulis=spec.paulis,
            verification_outcome=out["verification_outcome"],
            residual_weight=out["residual_weight"],
            logical_error=False))
    return campaign


def _ghz_flips(state, qubits: tuple[int, ...]) -> int:
    """X-flip count of a GHZ-like block relative to (|0..0>+|1..1>),
    anchored pairwise and minimized over branch relabeling."""
    n_total = state.n_qubits
    anchor = qubits[0]
    flips = 0
    for q in qubits[1:]:
        zz = (PauliOperator.single(n_total, anchor, "Z")
              * PauliOperator.single(n_total, q, "Z"))
        v = state.peek_observable(zz)
        if v == 0:
            raise ValueError("block is not in a definite flip pattern")
        flips += (1 - v) // 2
    return min(flips, len(qubits) - flips)


_CAUGHT_CLASSES = {
    frozenset(): "vpair_flip",          # (0..0 + 1..1)(01 + 10)_v
    frozenset({0, 1, 2}): "node_flip",  # one node's three qubits flipped
    frozenset({1, 2}): "tail2_flip",    # qubits 2,3 of one node flipped
    frozenset({2}): "tail1_flip",       # qubit 3 of one node flipped
}


def _interface_pattern(state, side_a, side_b, v_pair):
    """Flip pattern of the 3+3 interface block (local indices, canonical
    under branch relabeling and node swap) plus the v-pair ZZ flip."""
    n_total = state.n_qubits
    coupling = (*side_a, *side_b)
    anchor = coupling[0]
    pattern = [0] * len(coupling)
    for i, q in enumerate(coupling[1:], start=1):
        zz = (PauliOperator.single(n_total, anchor, "Z")
              * PauliOperator.single(n_total, q, "Z"))
        v = state.peek_observable(zz)
        if v == 0:
            raise ValueError("interface block is not flip-definite")
        pattern[i] = (1 - v) // 2
    if sum(pattern) > len(coupling) - sum(pattern):
        pattern = [1 - b for b in pattern]
    vzz = (PauliOperator.single(n_total, v_pair[0], "Z")
           * PauliOperator.single(n_total, v_pair[1], "Z"))
    v_flip = (1 - state.peek_observable(vzz)) // 2
    half = len(side_a)
    local = frozenset(
        frozenset(i for i in range(half) if pattern[s * half + i])
        for s in (0, 1)) - {frozenset()}
    return pattern, local, v_flip


def classify_interface_state(state, side_a, side_b, v_pair) -> str:
    """Name the block's state class: 'clean', one of the four listed
    single-X fault classes, or 'other'."""
    pattern, local, v_flip = _interface_pattern(state, side_a, side_b, v_pair)
    if not local and not v_flip:
        return "clean"
    if v_flip and len(local) <= 1:
        key = next(iter(local)) if local else frozenset()
        return _CAUGHT_CLASSES.get(key, "other")
    return "other"


def campaign_interface(pauli_set=("X",), two_qubit="all") -> FaultCampaign:
    """Single-fault campaign over one interface-ancilla preparation
    attempt (8-qubit standalone register).  Records the verification
    parity, the block's residual flip count, and the state class."""
    side_a, side_b, v_pair = (0, 1, 2), (3, 4, 5), (6, 7)
    nq = 8

    campaign = FaultCampaign("interface", tuple(pauli_set))
    supports = _traced_supports(
        nq, lambda ex: interface_prep_once(ex, side_a, side_b, v_pair))
    for spec in fault_specs(supports, pauli_set, two_qubit):
        ex = Executor(StabilizerTableau(nq), rng=np.random.default_rng(0),
                      fault=spec)
        snap = {}

        def inspect(state):
            pattern, _, _ = _interface_pattern(state, side_a, side_b, v_pair)
            snap["flips"] = min(sum(pattern), 6 - sum(pattern))
            snap["class"] = classify_interface_state(
                state, side_a, side_b, v_pair)

        parity = interface_prep_once(ex, side_a, side_b, v_pair,
                                     inspect=inspect)
        campaign.results.append(FaultOutcome(
            location=spec.location, paulis=spec.paulis,
            verification_outcome=parity, residual_weight=snap["flips"],
            logical_error=False, detail=snap["class"]))
    return campaign
