"""Stabilizer code registry: encoders, basic syndrome extraction, lookup
decoding, and stabilizer-reduced logical operators.

Conventions fixed here and relied on everywhere else:
  - qubit 0 is the leftmost character of a generator string;
  - syndrome bit i corresponds to generator i in listed order, with
    measurement outcome -1 recorded as bit 1;
  - decode-table ties are broken by lexicographically smallest
    (x_bits, z_bits).
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field

from .circuit import Circuit
from .executor import Executor
from .pauli import PauliOperator, _parity


@dataclass(frozen=True)
class SyndromeRecord:
    bits: tuple[int, ...]
    repetition_index: int = 0
    source: str = "basic"


@dataclass(frozen=True)
class StabilizerCode:
    name: str
    n: int
    k: int
    d: int
    generators: tuple[PauliOperator, ...]
    logical_x: tuple[PauliOperator, ...]
    logical_z: tuple[PauliOperator, ...]
    correctable: str = "XZ"  # Pauli types the decode table is built from
    d_label: str = ""
    decode_table: dict[tuple[int, ...], PauliOperator] = field(hash=False, default=None)

    def __post_init__(self):
        if self.decode_table is None:
            object.__setattr__(self, "decode_table", _build_decode_table(self))

    @property
    def n_syndromes(self) -> int:
        return 2 ** (self.n - self.k)

    def syndrome_of(self, error: PauliOperator) -> tuple[int, ...]:
        return tuple(0 if g.commutes(error) else 1 for g in self.generators)

    def stabilizer_elements(self):
        """All 2^(n-k) group elements, exact signs included."""
        for mask in range(self.n_syndromes):
            p = PauliOperator.identity(self.n)
            for i, g in enumerate(self.generators):
                if (mask >> i) & 1:
                    p = p * g
            yield p

    def in_stabilizer_group(self, p: PauliOperator) -> bool:
        """GF(2) membership of the (x, z) vector in the generator span.

        Global sign is ignored: -S acts on codewords as an unobservable
        phase.
        """
        x, z = p.x, p.z
        # eliminate against an echelonized copy of the generators
        rows = [(g.x, g.z) for g in self.generators]
        ech: list[tuple[int, int, int]] = []  # (pivot bit over 2n cols, x, z)
        for bx, bz in rows:
            vx, vz = bx, bz
            for piv, ex, ez in ech:
                if (vx << self.n | vz) & piv:
                    vx ^= ex
                    vz ^= ez
            v = vx << self.n | vz
            if v:
                ech.append((v & -v, vx, vz))
        for piv, ex, ez in ech:
            if (x << self.n | z) & piv:
                x ^= ex
                z ^= ez
        return x == 0 and z == 0

    def coset_weight(self, p: PauliOperator) -> int:
        """Minimum weight of p modulo the stabilizer group."""
        return min((p * s).weight for s in self.stabilizer_elements())

    def logical_class(self, p: PauliOperator) -> str:
        """Classify a syndrome-free residual: 'I', 'X', 'Z' or 'Y'."""
        xpart = any(not p.commutes(lz) for lz in self.logical_z)
        zpart = any(not p.commutes(lx) for lx in self.logical_x)
        return {(False, False): "I", (True, False): "X",
                (False, True): "Z", (True, True): "Y"}[(xpart, zpart)]


class DecodeError(KeyError):
    pass


def decode_lookup(syndrome, code: StabilizerCode) -> PauliOperator:
    """Minimal-weight correction for the syndrome (total table)."""
    bits = tuple(syndrome.bits if isinstance(syndrome, SyndromeRecord) else syndrome)
    if len(bits) != code.n - code.k:
        raise ValueError(f"syndrome length {len(bits)} != {code.n - code.k}")
    try:
        return code.decode_table[bits]
    except KeyError:
        raise DecodeError(f"syndrome {bits} not in table for {code.name}") from None


def _candidate_errors(code_n: int, kinds: str, weight: int):
    per_qubit = sorted(kinds)
    for qubits in itertools.combinations(range(code_n), weight):
        for assignment in itertools.product(per_qubit, repeat=weight):
            p = PauliOperator.identity(code_n)
            for q, kind in zip(qubits, assignment):
                p = p * PauliOperator.single(code_n, q, kind)
            yield p


def _build_decode_table(code: StabilizerCode):
    kinds = {"XZ": "XYZ", "X": "X", "Z": "Z"}[code.correctable]
    table: dict[tuple[int, ...], PauliOperator] = {}
    for weight in range(code.n + 1):
        if len(table) == code.n_syndromes:
            break
        cands = sorted(_candidate_errors(code.n, kinds, weight),
                       key=lambda p: (p.x_bits, p.z_bits))
        for p in cands:
            s = code.syndrome_of(p)
            if s not in table:
                table[s] = p
    if len(table) != code.n_syndromes:
        raise ValueError(f"decode table for {code.name} is not total")
    return table


# -- registry ---------------------------------------------------------------

def _paulis(*strings: str) -> tuple[PauliOperator, ...]:
    return tuple(PauliOperator.from_string(s) for s in strings)


@functools.lru_cache(maxsize=None)
def code_513() -> StabilizerCode:
    """The [[5,1,3]] code: the smallest code correcting an arbitrary
    single-qubit error."""
    return StabilizerCode(
        name="513", n=5, k=1, d=3,
        generators=_paulis("XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"),
        logical_x=_paulis("XXXXX"),
        logical_z=_paulis("ZZZZZ"),
        d_label="3")


@functools.lru_cache(maxsize=None)
def code_steane713() -> StabilizerCode:
    """The [[7,1,3]] Steane code (CSS, weight-4 generators)."""
    return StabilizerCode(
        name="steane713", n=7, k=1, d=3,
        generators=_paulis("IIIXXXX", "IXXIIXX", "XIXIXIX",
                           "IIIZZZZ", "IZZIIZZ", "ZIZIZIZ"),
        logical_x=_paulis("XXXXXXX"),
        logical_z=_paulis("ZZZZZZZ"),
        d_label="3")


@functools.lru_cache(maxsize=None)
def code_bitflip3() -> StabilizerCode:
    """Three-qubit repetition code protecting against X errors only."""
    return StabilizerCode(
        name="bitflip3", n=3, k=1, d=1,
        generators=_paulis("ZZI", "IZZ"),
        logical_x=_paulis("XXX"),
        logical_z=_paulis("ZZZ"),
        correctable="X",
        d_label="X-only")


@functools.lru_cache(maxsize=None)
def code_phaseflip3() -> StabilizerCode:
    """Dual repetition code protecting against Z errors only."""
    return StabilizerCode(
        name="phaseflip3", n=3, k=1, d=1,
        generators=_paulis("XXI", "IXX"),
        logical_x=_paulis("XXX"),
        logical_z=_paulis("ZZZ"),
        correctable="Z",
        d_label="Z-only")


@functools.lru_cache(maxsize=None)
def code_trivial() -> StabilizerCode:
    """A bare physical qubit treated as a [[1,1,1]] block."""
    return StabilizerCode(
        name="trivial", n=1, k=1, d=1,
        generators=(),
        logical_x=_paulis("X"),
        logical_z=_paulis("Z"),
        d_label="none")


CODE_FACTORIES = {
    "513": code_513,
    "steane713": code_steane713,
    "bitflip3": code_bitflip3,
    "phaseflip3": code_phaseflip3,
    "trivial": code_trivial,
}


def list_codes() -> tuple[str, ...]:
    return tuple(CODE_FACTORIES)


def get_code(name: str) -> StabilizerCode:
    try:
        return CODE_FACTORIES[name]()
    except KeyError:
        raise KeyError(f"unknown code {name!r}; known: {sorted(CODE_FACTORIES)}") \
            from None


# -- logical-operator reduction ---------------------------------------------

def reduce_logical(code: StabilizerCode, which: str) -> PauliOperator:
    """Minimum-weight representative of the logical coset L * stabilizer
    group, by exhaustive coset search.  Sign is the exact product sign."""
    if which not in ("X", "Z"):
        raise ValueError("which must be 'X' or 'Z'")
    logical = code.logical_x[0] if which == "X" else code.logical_z[0]
    best = None
    # ascending generator-subset order; ties keep the earliest subset, so the
    # [[5,1,3]] Z reduction lands on logical_z * K1
    for s in code.stabilizer_elements():
        cand = logical * s
        if best is None or cand.weight < best.weight:
            best = cand
    return best


# -- encoding ---------------------------------------------------------------

def preparation_circuit(targets: list[PauliOperator], n: int) -> Circuit:
    """Synthesize a Clifford circuit mapping |0..0> to the state stabilized
    by the n given independent, commuting, +/-1-sign Paulis.

    Works by reducing the target generator matrix to {+Z_j} with recorded
    gates, then emitting the reversed inverse gates.
    """
    if len(targets) != n:
        raise ValueError("need exactly n independent stabilizers")
    rows = [[p.x, p.z, p.phase_exp] for p in targets]
    gates: list[tuple[str, tuple[int, ...]]] = []

    def conj(name, qs):
        for r in rows:
            x, z, e = r
            if name == "H":
                (q,) = qs
                xb, zb = (x >> q) & 1, (z >> q) & 1
                e = (e + 2 * (xb & zb)) & 3
                x ^= (xb ^ zb) << q
                z ^= (xb ^ zb) << q
            elif name == "S":
                (q,) = qs
                xb = (x >> q) & 1
                e = (e + xb) & 3
                z ^= xb << q
            elif name == "X":
                (q,) = qs
                e = (e + 2 * ((z >> q) & 1)) & 3
            elif name == "CNOT":
                c, t = qs
                x ^= ((x >> c) & 1) << t
                z ^= ((z >> t) & 1) << c
            elif name == "CZ":
                a, b = qs
                e = (e + 2 * (((x >> a) & 1) & ((x >> b) & 1))) & 3
                z ^= ((x >> b) & 1) << a
                z ^= ((x >> a) & 1) << b
            r[0], r[1], r[2] = x, z, e

    def emit(name, *qs):
        gates.append((name, qs))
        conj(name, qs)

    for j in range(n):
        # reduce z-bits on finished columns (rows k<j are exactly +Z_k)
        for i in range(j, n):
            rows[i][1] &= ~((1 << j) - 1)
        piv = next((i for i in range(j, n) if (rows[i][0] >> j) & 1), None)
        if piv is None:
            if not any((rows[i][1] >> j) & 1 for i in range(j, n)):
                raise ValueError("target stabilizers are not independent")
            emit("H", j)
            piv = next(i for i in range(j, n) if (rows[i][0] >> j) & 1)
        rows[j], rows[piv] = rows[piv], rows[j]
        for k in range(n):
            if k != j and (rows[j][0] >> k) & 1:
                emit("CNOT", j, k)
        if (rows[j][1] >> j) & 1:
            emit("S", j)
        for k in range(n):
            if k != j and (rows[j][1] >> k) & 1:
                emit("CZ", j, k)
        emit("H", j)
        if rows[j][2] & 2:
            emit("X", j)
        if rows[j] != [0, 1 << j, 0]:
            raise AssertionError("synthesis failed to normalize a row")

    circ = Circuit(n)
    for name, qs in reversed(gates):
        if name == "S":
            for _ in range(3):  # S inverse within the {H,S,X,CNOT,CZ} set
                circ.gate("S", *qs)
        else:
            circ.gate(name, *qs)
    return circ


@functools.lru_cache(maxsize=None)
def encode_zero(code_name: str) -> Circuit:
    """Circuit preparing |0>_L of the named code from |0..0>."""
    code = get_code(code_name)
    targets = list(code.generators) + list(code.logical_z)
    return preparation_circuit(targets, code.n)


# -- basic (non-fault-tolerant) syndrome extraction --------------------------

def _controlled_factor(ex: Executor, kind: str, control: int, target: int):
    """Controlled-P from an ancilla, P in {X, Y, Z}; Y as CZ;CNOT;S."""
    if kind == "X":
        ex.apply_gate("CNOT", control, target)
    elif kind == "Z":
        ex.apply_gate("CZ", control, target)
    elif kind == "Y":
        ex.apply_gate("CZ", control, target)
        ex.apply_gate("CNOT", control, target)
        ex.apply_gate("S", control)
    else:
        raise ValueError(f"bad factor {kind!r}")


def measure_operator_with_ancilla(ex: Executor, obs: PauliOperator,
                                  qubit_map: tuple[int, ...], ancilla: int) -> int:
    """Measure a Pauli observable via one ancilla: |+>, controlled factors,
    H, MZ.  Returns +1/-1."""
    ex.reset(ancilla)
    ex.apply_gate("H", ancilla)
    for local in obs.support:
        _controlled_factor(ex, obs.factor(local), ancilla, qubit_map[local])
    ex.apply_gate("H", ancilla)
    return ex.measure_z(ancilla)


def extract_syndrome_basic(ex: Executor, code: StabilizerCode,
                           data_qubits: tuple[int, ...], ancilla: int,
                           repetition_index: int = 0) -> SyndromeRecord:
    """Sequential single-ancilla measurement of every generator."""
    if len(data_qubits) != code.n:
        raise ValueError("data register size mismatch")
    bits = tuple(
        (1 - measure_operator_with_ancilla(ex, g, data_qubits, ancilla)) // 2
        for g in code.generators)
    return SyndromeRecord(bits, repetition_index, "basic")


def apply_pauli_gates(ex: Executor, p: PauliOperator, qubit_map: tuple[int, ...]):
    """Apply a correction Pauli as individual (noisy) gates."""
    for local in p.support:
        ex.apply_gate(p.factor(local), qubit_map[local])
