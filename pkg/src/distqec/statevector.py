"""Dense state-vector oracle for cross-validating the tableau simulator.

Deliberately independent of tableau.py: gates act by matrix/index
arithmetic on the full 2^n amplitude vector.  Limited to 16 qubits.
Qubit 0 indexes the most significant axis so that string order matches
pauli.py ("XZZXI" acts with X on the leftmost/first qubit).
"""

from __future__ import annotations

import numpy as np

from .pauli import PauliOperator

MAX_ORACLE_QUBITS = 16

_SQ = {
    "H": np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2),
    "S": np.array([[1, 0], [0, 1j]], dtype=complex),
    "SDG": np.array([[1, 0], [0, -1j]], dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


class ResourceError(Exception):
    """Oracle refused: instance too large for dense simulation."""


class StateVector:
    """Unit-norm amplitude vector over n qubits, initially |0...0>."""

    def __init__(self, n_qubits: int):
        if n_qubits < 1:
            raise ValueError("need at least one qubit")
        if n_qubits > MAX_ORACLE_QUBITS:
            raise ResourceError(
                f"dense oracle limited to {MAX_ORACLE_QUBITS} qubits, got {n_qubits}")
        self.n = n_qubits
        self.amps = np.zeros(2 ** n_qubits, dtype=complex)
        self.amps[0] = 1.0

    @property
    def n_qubits(self) -> int:
        return self.n

    def copy(self) -> "StateVector":
        s = StateVector.__new__(StateVector)
        s.n = self.n
        s.amps = self.amps.copy()
        return s

    def _check(self, *qubits: int):
        for q in qubits:
            if not 0 <= q < self.n:
                raise IndexError(f"qubit {q} out of range for n={self.n}")

    def _axes(self):
        return self.amps.reshape((2,) * self.n)

    def apply(self, name: str, *qubits: int):
        if name in _SQ:
            (q,) = qubits
            self._check(q)
            t = self._axes()
            t = np.moveaxis(t, q, 0)
            t[...] = np.einsum("ab,b...->a...", _SQ[name], t.copy())
        elif name in ("CNOT", "CZ"):
            a, b = qubits
            self._check(a, b)
            if a == b:
                raise IndexError("control equals target")
            t = np.moveaxis(self._axes(), (a, b), (0, 1))
            if name == "CNOT":
                t[1] = t[1, ::-1]
            else:
                t[1, 1] *= -1
        else:
            raise ValueError(f"unknown gate {name!r}")

    # -- Pauli action ------------------------------------------------------

    def _pauli_image(self, obs: PauliOperator) -> np.ndarray:
        """Return the amplitudes of obs|psi>."""
        if obs.n_qubits != self.n:
            raise ValueError("operator size mismatch")
        n = self.n
        idx = np.arange(2 ** n)
        # basis label b maps qubit q to bit (n-1-q) of the flat index
        xmask = zmask = 0
        for q in range(n):
            bit = 1 << (n - 1 - q)
            if (obs.x >> q) & 1:
                xmask |= bit
            if (obs.z >> q) & 1:
                zmask |= bit
        # X^x Z^z |b> = (-1)^(z.b) |b ^ x>
        signs = 1 - 2 * (np.bitwise_count(idx & zmask) & 1).astype(np.int64)
        out = np.zeros_like(self.amps)
        out[idx ^ xmask] = (1j ** obs.phase_exp) * signs * self.amps
        return out

    def apply_pauli(self, obs: PauliOperator):
        self.amps = self._pauli_image(obs)

    def measure_pauli(self, obs: PauliOperator, rng=None, force=None):
        """Projective measurement of a Hermitian Pauli; mirrors the tableau API."""
        if not obs.is_hermitian():
            raise ValueError("observable must have sign +1 or -1")
        image = self._pauli_image(obs)
        plus = (self.amps + image) / 2
        minus = (self.amps - image) / 2
        p_plus = float(np.vdot(plus, plus).real)
        p_minus = float(np.vdot(minus, minus).real)
        tol = 1e-12
        if p_minus < tol:
            if force == -1:
                raise ValueError("forced outcome has zero probability")
            self.amps = plus / np.sqrt(p_plus)
            return 1, True
        if p_plus < tol:
            if force == 1:
                raise ValueError("forced outcome has zero probability")
            self.amps = minus / np.sqrt(p_minus)
            return -1, True
        if force is not None:
            outcome = force
        else:
            if rng is None:
                raise ValueError("random measurement outcome needs an rng")
            outcome = 1 if rng.random() < p_plus else -1
        branch, p = (plus, p_plus) if outcome == 1 else (minus, p_minus)
        self.amps = branch / np.sqrt(p)
        return outcome, False

    def branch_probability(self, obs: PauliOperator, outcome: int) -> float:
        image = self._pauli_image(obs)
        branch = (self.amps + outcome * image) / 2
        return float(np.vdot(branch, branch).real)

    def measure_z(self, q: int, rng=None, force=None):
        return self.measure_pauli(PauliOperator.single(self.n, q, "Z"),
                                  rng=rng, force=force)

    def reset(self, q: int, rng=None):
        outcome, _ = self.measure_z(q, rng=rng)
        if outcome == -1:
            self.apply("X", q)

    # -- comparisons -------------------------------------------------------

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def equals_up_to_phase(self, other: "StateVector", tol: float = 1e-10) -> bool:
        overlap = np.vdot(self.amps, other.amps)
        return abs(abs(overlap) - 1.0) < tol

    def fidelity_with(self, amplitudes: np.ndarray) -> float:
        return float(abs(np.vdot(self.amps, amplitudes)))
