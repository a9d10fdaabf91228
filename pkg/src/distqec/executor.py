"""Step executor: runs protocol steps on a simulator state with optional
stochastic noise or a single injected fault.

The executor numbers every executed step (gate, measurement, reset, idle
tick) with a running location index.  A `FaultSpec` injects one Pauli at
one location: after gate/reset/idle steps, before measurement steps.
Stochastic noise follows the same placement.  Works identically over
StabilizerTableau and StateVector states.

Noise draws use geometric skip counting: for each distinct probability p
the executor draws how many Bernoulli(p) checks to skip until the next
fault fires.  This is sample-exact (each check is still an independent
Bernoulli(p) event) while consuming one uniform per fault instead of one
per check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circuit import Circuit, Cond, Gate, Measure, Reset
from .pauli import PauliOperator

_ONE_QUBIT_FAULTS = ("X", "Y", "Z")
_TWO_QUBIT_FAULTS = tuple(
    (a, b) for a in "IXYZ" for b in "IXYZ" if (a, b) != ("I", "I"))


@dataclass(frozen=True)
class FaultSpec:
    """Inject `paulis` (positionally over the step's support) at `location`."""
    location: int
    paulis: tuple[str, ...]


class Executor:
    def __init__(self, state, rng=None, noise=None, fault: FaultSpec | None = None,
                 uniforms=None):
        self.state = state
        self.rng = rng
        self.noise = noise
        self.fault = fault
        self.records: dict[str, int] = {}
        self.location = 0
        self.fault_fired = False
        self.trace: list[tuple[int, ...]] | None = None  # per-location supports
        self.noise_log: list[tuple[int, tuple[int, ...], str]] | None = None
        # pre-supplied uniforms are consumed before drawing from rng
        self._buf = np.asarray(uniforms, dtype=float) if uniforms is not None \
            else np.empty(0)
        self._bi = 0
        self._skip: dict[float, int] = {}  # remaining clean checks per p

    # uniform stream; doubles as the rng adapter for state.measure_pauli
    def random(self) -> float:
        if self._bi >= len(self._buf):
            if self.rng is None:
                raise ValueError("executor has no rng but randomness was requested")
            self._buf = self.rng.random(256)
            self._bi = 0
        u = self._buf[self._bi]
        self._bi += 1
        return float(u)

    def _bernoulli(self, p: float) -> bool:
        """One Bernoulli(p) noise check via geometric skip counting."""
        if p >= 1.0:
            return True
        left = self._skip.get(p)
        if left is None:
            left = int(math.log1p(-self.random()) / math.log1p(-p))
        if left:
            self._skip[p] = left - 1
            return False
        self._skip[p] = int(math.log1p(-self.random()) / math.log1p(-p))
        return True

    def _tick(self, support: tuple[int, ...]):
        if self.trace is not None:
            self.trace.append(tuple(support))
        self.location += 1

    # -- fault / noise placement ------------------------------------------

    def _inject(self, support: tuple[int, ...], labels: tuple[str, ...]):
        for q, kind in zip(support, labels):
            if kind != "I":
                self.state.apply(kind, q)

    def _maybe_fault(self, support) -> None:
        if (self.fault is not None and not self.fault_fired
                and self.location == self.fault.location):
            self.fault_fired = True
            self._inject(support, self.fault.paulis)

    def _note(self, support, label: str):
        if self.noise_log is not None:
            self.noise_log.append((self.location, tuple(support), label))

    def _gate_noise(self, support):
        m = self.noise
        if len(support) == 1:
            if m.p1 > 0 and self._bernoulli(m.p1):
                k = _ONE_QUBIT_FAULTS[int(self.random() * 3) % 3]
                self.state.apply(k, support[0])
                self._note(support, k)
        else:
            if m.p2 > 0 and self._bernoulli(m.p2):
                pair = _TWO_QUBIT_FAULTS[int(self.random() * 15) % 15]
                self._inject(support, pair)
                self._note(support, "".join(pair))

    # -- steps -------------------------------------------------------------

    def apply_gate(self, name: str, *qubits: int):
        self.state.apply(name, *qubits)
        if self.fault is not None:
            self._maybe_fault(qubits)
        if self.noise is not None:
            self._gate_noise(qubits)
        if self.trace is not None:
            self.trace.append(tuple(qubits))
        self.location += 1

    def measure_z(self, qubit: int, record: str | None = None) -> int:
        if self.fault is not None:
            self._maybe_fault((qubit,))
        outcome, _ = self.state.measure_z(qubit, rng=self)
        m = self.noise
        if m is not None and m.p_meas > 0 and self._bernoulli(m.p_meas):
            outcome = -outcome
            self._note((qubit,), "flip")
        if record is not None:
            self.records[record] = (1 - outcome) // 2
        if self.trace is not None:
            self.trace.append((qubit,))
        self.location += 1
        return outcome

    def measure_pauli(self, obs: PauliOperator, record: str | None = None) -> int:
        """Direct multi-qubit operator measurement (used by noiseless readback
        and by protocols that model it as a primitive)."""
        self._maybe_fault(obs.support)
        outcome, _ = self.state.measure_pauli(obs, rng=self)
        m = self.noise
        if m is not None and m.p_meas > 0 and self._bernoulli(m.p_meas):
            outcome = -outcome
            self._note(obs.support, "flip")
        if record is not None:
            self.records[record] = (1 - outcome) // 2
        self._tick(obs.support)
        return outcome

    def reset(self, qubit: int):
        self.state.reset(qubit, rng=self)
        if self.fault is not None:
            self._maybe_fault((qubit,))
        m = self.noise
        if m is not None and m.p1 > 0 and self._bernoulli(m.p1):
            k = _ONE_QUBIT_FAULTS[int(self.random() * 3) % 3]
            self.state.apply(k, qubit)
            self._note((qubit,), k)
        if self.trace is not None:
            self.trace.append((qubit,))
        self.location += 1

    def idle(self, qubits: tuple[int, ...]):
        """One idle tick over `qubits`: independent X and Z memory errors."""
        self._maybe_fault(qubits)
        m = self.noise
        if m is not None and m.p_mem > 0:
            for q in qubits:
                if self._bernoulli(m.p_mem):
                    self.state.apply("X", q)
                    self._note((q,), "X")
                if self._bernoulli(m.p_mem):
                    self.state.apply("Z", q)
                    self._note((q,), "Z")
        self._tick(tuple(qubits))

    def parity(self, records) -> int:
        p = 0
        for r in records:
            p ^= self.records[r]
        return p

    # -- circuit runner ----------------------------------------------------

    def run_circuit(self, circuit: Circuit, qubit_map=None):
        """Execute a circuit; `qubit_map` relocates circuit qubit i to
        global qubit qubit_map[i]."""
        if qubit_map is None:
            remap = lambda qs: qs
        else:
            remap = lambda qs: tuple(qubit_map[q] for q in qs)
        for step in circuit.steps:
            if isinstance(step, Gate):
                self.apply_gate(step.name, *remap(step.qubits))
            elif isinstance(step, Measure):
                self.measure_z(remap((step.qubit,))[0], step.record)
            elif isinstance(step, Reset):
                self.reset(remap((step.qubit,))[0])
            elif isinstance(step, Cond):
                if self.parity(step.records):
                    self.apply_gate(step.gate.name, *remap(step.gate.qubits))
                else:
                    self._tick(())  # keep fault indices stable
            else:
                raise TypeError(f"unknown step {step!r}")
        return self.records
