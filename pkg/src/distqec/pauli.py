"""n-qubit Pauli operators in symplectic (X|Z) bit form.

Internal convention ("XZ form"): an operator is stored as

    P = i**phase_exp * prod_q X_q**x_q Z_q**z_q

with ``x`` and ``z`` integer bitmasks over qubits (bit q = qubit q) and
``phase_exp`` in {0, 1, 2, 3}.  The Hermitian Pauli Y equals i*XZ, so a
string containing Y carries phase_exp 1 per Y relative to its XZ bits.
Qubit 0 is the leftmost character of a string like "XZZXI".
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

_CHAR_TO_BITS = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}
_BITS_TO_CHAR = {(0, 0): "I", (1, 0): "X", (0, 1): "Z", (1, 1): "Y"}
_SIGN_TO_EXP = {1: 0, 1j: 1, -1: 2, -1j: 3}
_EXP_TO_SIGN = (1, 1j, -1, -1j)


def _parity(v: int) -> int:
    return bin(v).count("1") & 1


@dataclass(frozen=True)
class PauliOperator:
    """Immutable Pauli string with sign, in symplectic bit-pair form."""

    n_qubits: int
    x: int
    z: int
    phase_exp: int = 0

    def __post_init__(self):
        if self.n_qubits < 0:
            raise ValueError("n_qubits must be non-negative")
        mask = (1 << self.n_qubits) - 1
        if self.x & ~mask or self.z & ~mask:
            raise ValueError("x/z bits outside qubit range")
        if not 0 <= self.phase_exp <= 3:
            raise ValueError("phase_exp must be in 0..3")

    # -- constructors ------------------------------------------------------

    @classmethod
    def identity(cls, n_qubits: int) -> "PauliOperator":
        return cls(n_qubits, 0, 0, 0)

    @classmethod
    def from_string(cls, s: str, sign: complex = 1) -> "PauliOperator":
        """Parse e.g. "XZZXI"; optional sign in {1, -1, 1j, -1j}."""
        s = s.strip()
        if s.startswith("+"):
            s = s[1:]
        elif s.startswith("-"):
            sign = sign * -1
            s = s[1:]
        x = z = 0
        phase = _SIGN_TO_EXP[sign]
        for q, ch in enumerate(s):
            try:
                xb, zb = _CHAR_TO_BITS[ch]
            except KeyError:
                raise ValueError(f"invalid Pauli character {ch!r}") from None
            x |= xb << q
            z |= zb << q
            phase = (phase + (xb & zb)) & 3  # Y = i * XZ
        return cls(len(s), x, z, phase)

    @classmethod
    @lru_cache(maxsize=4096)
    def single(cls, n_qubits: int, qubit: int, kind: str) -> "PauliOperator":
        """Weight-1 operator `kind` in {X, Y, Z} acting on `qubit`."""
        if not 0 <= qubit < n_qubits:
            raise ValueError(f"qubit {qubit} out of range for n={n_qubits}")
        xb, zb = _CHAR_TO_BITS[kind]
        return cls(n_qubits, xb << qubit, zb << qubit, xb & zb)

    # -- queries -----------------------------------------------------------

    @property
    def x_bits(self) -> tuple[int, ...]:
        return tuple((self.x >> q) & 1 for q in range(self.n_qubits))

    @property
    def z_bits(self) -> tuple[int, ...]:
        return tuple((self.z >> q) & 1 for q in range(self.n_qubits))

    @property
    def sign(self) -> complex:
        """Coefficient relative to the Hermitian string of I/X/Y/Z."""
        y_count = bin(self.x & self.z).count("1")
        return _EXP_TO_SIGN[(self.phase_exp - y_count) & 3]

    @property
    def weight(self) -> int:
        return bin(self.x | self.z).count("1")

    @property
    def support(self) -> tuple[int, ...]:
        s = self.x | self.z
        return tuple(q for q in range(self.n_qubits) if (s >> q) & 1)

    def is_hermitian(self) -> bool:
        """True iff P has sign +1 or -1 (equivalently P**2 = I)."""
        return (self.phase_exp & 1) == (bin(self.x & self.z).count("1") & 1)

    def is_identity(self) -> bool:
        return self.x == 0 and self.z == 0

    def commutes(self, other: "PauliOperator") -> bool:
        """Symplectic inner product of the (x, z) vectors is 0 mod 2."""
        if self.n_qubits != other.n_qubits:
            raise ValueError("qubit counts differ")
        return _parity(self.x & other.z) == _parity(self.z & other.x)

    # -- algebra -----------------------------------------------------------

    def __mul__(self, other: "PauliOperator") -> "PauliOperator":
        """Operator product self * other (self applied after other)."""
        if self.n_qubits != other.n_qubits:
            raise ValueError("qubit counts differ")
        # Moving Z factors of self past X factors of other costs (-1) each.
        phase = (self.phase_exp + other.phase_exp
                 + 2 * _parity(self.z & other.x)) & 3
        return PauliOperator(self.n_qubits, self.x ^ other.x,
                             self.z ^ other.z, phase)

    def __neg__(self) -> "PauliOperator":
        return PauliOperator(self.n_qubits, self.x, self.z,
                             (self.phase_exp + 2) & 3)

    def embed(self, n_qubits: int, qubits: tuple[int, ...]) -> "PauliOperator":
        """Place this operator onto the given qubits of a larger register."""
        if len(qubits) != self.n_qubits:
            raise ValueError("qubit map length mismatch")
        x = z = 0
        for local, glob in enumerate(qubits):
            if not 0 <= glob < n_qubits:
                raise ValueError(f"target qubit {glob} out of range")
            x |= ((self.x >> local) & 1) << glob
            z |= ((self.z >> local) & 1) << glob
        return PauliOperator(n_qubits, x, z, self.phase_exp)

    def factor(self, qubit: int) -> str:
        """Single-qubit tensor factor at `qubit` as 'I', 'X', 'Y' or 'Z'."""
        return _BITS_TO_CHAR[((self.x >> qubit) & 1, (self.z >> qubit) & 1)]

    def __str__(self) -> str:
        body = "".join(self.factor(q) for q in range(self.n_qubits))
        return {1: "+", -1: "-", 1j: "+i", -1j: "-i"}[self.sign] + body

    def __repr__(self) -> str:
        return f"PauliOperator({str(self)!r})"
