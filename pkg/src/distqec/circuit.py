"""Circuit representation and its line-oriented text format.

One step per line:

    QUBITS 5            # header, first non-comment line
    H 0
    CNOT 0 1
    MZ 3 -> r1
    RESET 2
    COND r1 X 2
    COND parity(r1,r2) Z 4

Gates are H, S, SDG, X, Y, Z (one qubit) and CNOT, CZ (two qubits).
A COND step applies its gate when the parity of the listed records is 1.
Every step is a fault location for fault injection.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

GATE_ARITY = {"H": 1, "S": 1, "SDG": 1, "X": 1, "Y": 1, "Z": 1,
              "CNOT": 2, "CZ": 2}


@dataclass(frozen=True)
class Gate:
    name: str
    qubits: tuple[int, ...]

    @property
    def support(self) -> tuple[int, ...]:
        return self.qubits

    def __str__(self) -> str:
        return " ".join([self.name, *map(str, self.qubits)])


@dataclass(frozen=True)
class Measure:
    qubit: int
    record: str

    @property
    def support(self) -> tuple[int, ...]:
        return (self.qubit,)

    def __str__(self) -> str:
        return f"MZ {self.qubit} -> {self.record}"


@dataclass(frozen=True)
class Reset:
    qubit: int

    @property
    def support(self) -> tuple[int, ...]:
        return (self.qubit,)

    def __str__(self) -> str:
        return f"RESET {self.qubit}"


@dataclass(frozen=True)
class Cond:
    records: tuple[str, ...]
    gate: Gate

    @property
    def support(self) -> tuple[int, ...]:
        return self.gate.qubits

    def __str__(self) -> str:
        if len(self.records) == 1:
            sel = self.records[0]
        else:
            sel = "parity({})".format(",".join(self.records))
        return f"COND {sel} {self.gate}"


Step = Gate | Measure | Reset | Cond


class CircuitError(ValueError):
    pass


@dataclass
class Circuit:
    n_qubits: int
    steps: list[Step] = field(default_factory=list)

    # -- builders ----------------------------------------------------------

    def gate(self, name: str, *qubits: int) -> "Circuit":
        self.steps.append(Gate(name, tuple(qubits)))
        return self

    def mz(self, qubit: int, record: str) -> "Circuit":
        self.steps.append(Measure(qubit, record))
        return self

    def reset(self, qubit: int) -> "Circuit":
        self.steps.append(Reset(qubit))
        return self

    def cond(self, records, name: str, *qubits: int) -> "Circuit":
        if isinstance(records, str):
            records = (records,)
        self.steps.append(Cond(tuple(records), Gate(name, tuple(qubits))))
        return self

    @property
    def fault_locations(self) -> range:
        return range(len(self.steps))

    # -- validation --------------------------------------------------------

    def validate(self):
        seen: set[str] = set()
        for i, step in enumerate(self.steps):
            gate = step.gate if isinstance(step, Cond) else step
            if isinstance(gate, Gate):
                if gate.name not in GATE_ARITY:
                    raise CircuitError(f"step {i}: unknown gate {gate.name!r}")
                if len(gate.qubits) != GATE_ARITY[gate.name]:
                    raise CircuitError(f"step {i}: {gate.name} arity mismatch")
                if len(set(gate.qubits)) != len(gate.qubits):
                    raise CircuitError(f"step {i}: repeated qubit")
            for q in step.support:
                if not 0 <= q < self.n_qubits:
                    raise CircuitError(f"step {i}: qubit {q} out of range")
            if isinstance(step, Cond):
                missing = [r for r in step.records if r not in seen]
                if missing:
                    raise CircuitError(
                        f"step {i}: records {missing} referenced before measurement")
            if isinstance(step, Measure):
                seen.add(step.record)

    # -- text format -------------------------------------------------------

    def to_text(self) -> str:
        lines = [f"QUBITS {self.n_qubits}"]
        lines.extend(str(s) for s in self.steps)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Circuit":
        circuit = None
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            tokens = line.split()
            if circuit is None:
                if tokens[0] != "QUBITS" or len(tokens) != 2:
                    raise CircuitError(f"line {lineno}: expected 'QUBITS <n>' header")
                circuit = cls(int(tokens[1]))
                continue
            circuit.steps.append(_parse_step(tokens, lineno))
        if circuit is None:
            raise CircuitError("empty circuit text")
        circuit.validate()
        return circuit


def _parse_step(tokens: list[str], lineno: int) -> Step:
    head = tokens[0]
    try:
        if head == "MZ":
            if len(tokens) != 4 or tokens[2] != "->":
                raise CircuitError(f"line {lineno}: expected 'MZ <q> -> <record>'")
            return Measure(int(tokens[1]), tokens[3])
        if head == "RESET":
            return Reset(int(tokens[1]))
        if head == "COND":
            sel = tokens[1]
            m = re.fullmatch(r"parity\(([\w,]+)\)", sel)
            records = tuple(m.group(1).split(",")) if m else (sel,)
            return Cond(records, Gate(tokens[2], tuple(map(int, tokens[3:]))))
        if head in GATE_ARITY:
            return Gate(head, tuple(map(int, tokens[1:])))
    except (ValueError, IndexError) as exc:
        raise CircuitError(f"line {lineno}: malformed step: {exc}") from None
    raise CircuitError(f"line {lineno}: unknown step {head!r}")
