"""Exact stabilizer-tableau simulation of Clifford circuits.

The tableau keeps n destabilizer rows (0..n-1) and n stabilizer rows
(n..2n-1), stored column-major: for each qubit q, ``xs[q]`` and ``zs[q]``
are Python integers whose bit r is the X/Z bit of row r.  Phases are two
bitplanes ``e1``/``e2`` giving the XZ-form exponent e = e1 + 2*e2 per row
(see pauli.py).  Column-major bitmasks make every Clifford gate a handful
of integer operations regardless of row count.
"""

from __future__ import annotations

from .pauli import PauliOperator, _parity

try:
    from . import _kernels as _k
except ImportError:          # pragma: no cover - numba not installed
    _k = None

# widest state whose 2n-bit row masks fit a signed 64-bit integer
_FAST_MAX_QUBITS = 31


class StabilizerTableau:
    """Stabilizer state of n qubits, initially |0...0>.

    Instantiating picks the fastest available representation: states of
    at most 31 qubits get numba-compiled column kernels over int64
    arrays, wider states (or installs without numba) get the reference
    big-integer implementation.  Both are bit-for-bit equivalent.
    """

    def __new__(cls, n_qubits: int = 0):
        if (cls is StabilizerTableau and _k is not None
                and 1 <= n_qubits <= _FAST_MAX_QUBITS):
            return super().__new__(_FastTableau)
        return super().__new__(cls)

    def __init__(self, n_qubits: int):
        if n_qubits < 1:
            raise ValueError("need at least one qubit")
        self.n = n_qubits
        # destabilizer row q = X_q, stabilizer row n+q = Z_q
        self.xs = [1 << q for q in range(n_qubits)]
        self.zs = [1 << (n_qubits + q) for q in range(n_qubits)]
        self.e1 = 0
        self.e2 = 0

    @property
    def n_qubits(self) -> int:
        return self.n

    def copy(self) -> "StabilizerTableau":
        t = StabilizerTableau.__new__(StabilizerTableau)
        t.n = self.n
        t.xs = list(self.xs)
        t.zs = list(self.zs)
        t.e1 = self.e1
        t.e2 = self.e2
        return t

    # -- gates -------------------------------------------------------------

    def _check(self, *qubits: int):
        for q in qubits:
            if not 0 <= q < self.n:
                raise IndexError(f"qubit {q} out of range for n={self.n}")

    def h(self, q: int):
        self._check(q)
        xq, zq = self.xs[q], self.zs[q]
        self.e2 ^= xq & zq
        self.xs[q], self.zs[q] = zq, xq

    def s(self, q: int):
        self._check(q)
        xq = self.xs[q]
        carry = self.e1 & xq
        self.e1 ^= xq
        self.e2 ^= carry
        self.zs[q] ^= xq

    def sdg(self, q: int):
        self.s(q)
        self.s(q)
        self.s(q)

    def x(self, q: int):
        self._check(q)
        self.e2 ^= self.zs[q]

    def z(self, q: int):
        self._check(q)
        self.e2 ^= self.xs[q]

    def y(self, q: int):
        self._check(q)
        self.e2 ^= self.xs[q] ^ self.zs[q]

    def cnot(self, c: int, t: int):
        self._check(c, t)
        if c == t:
            raise IndexError("control equals target")
        self.xs[t] ^= self.xs[c]
        self.zs[c] ^= self.zs[t]

    def cz(self, a: int, b: int):
        self._check(a, b)
        if a == b:
            raise IndexError("control equals target")
        self.e2 ^= self.xs[a] & self.xs[b]
        self.zs[a] ^= self.xs[b]
        self.zs[b] ^= self.xs[a]

    _GATES = {"H": h, "S": s, "SDG": sdg, "X": x, "Y": y, "Z": z,
              "CNOT": cnot, "CZ": cz}

    def apply(self, name: str, *qubits: int):
        try:
            fn = self._GATES[name]
        except KeyError:
            raise ValueError(f"unknown gate {name!r}") from None
        fn(self, *qubits)

    # -- Pauli application and measurement ---------------------------------

    def _anticommute_mask(self, obs: PauliOperator) -> int:
        """Bit r set iff row r anticommutes with `obs`."""
        m = 0
        bits = obs.z
        while bits:
            low = bits & -bits
            m ^= self.xs[low.bit_length() - 1]
            bits ^= low
        bits = obs.x
        while bits:
            low = bits & -bits
            m ^= self.zs[low.bit_length() - 1]
            bits ^= low
        return m

    def apply_pauli(self, obs: PauliOperator):
        """Apply a Pauli unitary: flips signs of anticommuting rows."""
        if obs.n_qubits != self.n:
            raise ValueError("operator size mismatch")
        self.e2 ^= self._anticommute_mask(obs)

    def _row(self, r: int) -> tuple[int, int, int]:
        x = z = 0
        for q in range(self.n):
            x |= ((self.xs[q] >> r) & 1) << q
            z |= ((self.zs[q] >> r) & 1) << q
        e = ((self.e1 >> r) & 1) + 2 * ((self.e2 >> r) & 1)
        return x, z, e

    def row_operator(self, r: int) -> PauliOperator:
        x, z, e = self._row(r)
        return PauliOperator(self.n, x, z, e)

    def stabilizer_rows(self) -> list[PauliOperator]:
        return [self.row_operator(self.n + i) for i in range(self.n)]

    def destabilizer_rows(self) -> list[PauliOperator]:
        return [self.row_operator(i) for i in range(self.n)]

    def measure_pauli(self, obs: PauliOperator, rng=None, force=None):
        """Projectively measure a Hermitian Pauli observable.

        Returns (outcome, deterministic) with outcome in {+1, -1}.  When the
        observable is in +/-(stabilizer group) the outcome is forced and the
        state unchanged; otherwise the outcome is drawn from `rng` (or set by
        `force`) and the state projected onto that eigenspace.
        """
        if obs.n_qubits != self.n:
            raise ValueError("operator size mismatch")
        if not obs.is_hermitian():
            raise ValueError("observable must have sign +1 or -1")
        m = self._anticommute_mask(obs)
        stab_mask = m >> self.n
        if stab_mask == 0:
            return self._deterministic_outcome(obs, m, force), True

        p_row = self.n + (stab_mask & -stab_mask).bit_length() - 1
        if force is not None:
            outcome = force
        else:
            if rng is None:
                raise ValueError("random measurement outcome needs an rng")
            outcome = 1 if rng.random() < 0.5 else -1

        # single pass over columns: batch R_t <- R_t * R_p for every
        # anticommuting row, move the old pivot row into its paired
        # destabilizer slot, and write outcome * obs into the pivot slot
        dbit = 1 << (p_row - self.n)
        pbit = 1 << p_row
        keep = ~(dbit | pbit)
        targets = m & ~pbit
        oe = (obs.phase_exp + (0 if outcome == 1 else 2)) & 3
        ox, oz = obs.x, obs.z
        acc = 0
        xs, zs = self.xs, self.zs
        for q in range(self.n):
            xq = xs[q]
            zq = zs[q]
            px = xq & pbit
            pz = zq & pbit
            if px:
                acc ^= zq
                xq ^= targets
            if pz:
                zq ^= targets
            xs[q] = (xq & keep) | (dbit if px else 0) \
                | (pbit if (ox >> q) & 1 else 0)
            zs[q] = (zq & keep) | (dbit if pz else 0) \
                | (pbit if (oz >> q) & 1 else 0)
        pe1 = self.e1 & pbit
        pe2 = self.e2 & pbit
        lo = targets if pe1 else 0
        hi = targets if pe2 else 0
        carry = self.e1 & lo
        e1 = self.e1 ^ lo
        e2 = self.e2 ^ hi ^ carry ^ (acc & targets)
        self.e1 = (e1 & keep) | (dbit if pe1 else 0) | (pbit if oe & 1 else 0)
        self.e2 = (e2 & keep) | (dbit if pe2 else 0) | (pbit if oe & 2 else 0)
        return outcome, False

    def _deterministic_outcome(self, obs, m, force):
        # obs commutes with every stabilizer: it is +/- a product of
        # stabilizer rows, indexed by the anticommuting destabilizers.
        # The product's phase is accumulated column-wise: sum of the row
        # phase exponents plus 2 * (pairs i<j with z_i & x_j set), which
        # equals the ordered XZ-form product phase.
        n = self.n
        sel = m & ((1 << n) - 1)
        mask = sel << n
        ae = (self.e1 & mask).bit_count() + 2 * (self.e2 & mask).bit_count()
        cross = 0
        for q in range(n):
            xm = (self.xs[q] >> n) & sel
            if not xm:
                continue
            zm = (self.zs[q] >> n) & sel
            if not zm:
                continue
            while xm:
                low = xm & -xm
                cross ^= (zm & (low - 1)).bit_count() & 1
                xm ^= low
        outcome = 1 if (ae + 2 * cross) & 3 == obs.phase_exp else -1
        if force is not None and force != outcome:
            raise ValueError("forced outcome has zero probability")
        return outcome

    def peek_observable(self, obs: PauliOperator) -> int:
        """Expectation of a Hermitian Pauli: +1, -1, or 0 if random."""
        if not obs.is_hermitian():
            raise ValueError("observable must have sign +1 or -1")
        m = self._anticommute_mask(obs)
        if m >> self.n:
            return 0
        return self._deterministic_outcome(obs, m, None)

    def measure_z(self, q: int, rng=None, force=None):
        self._check(q)
        stab_mask = self.xs[q] >> self.n
        if stab_mask == 0:
            # deterministic; when exactly one destabilizer anticommutes, its
            # partner stabilizer row is +/- Z_q outright (common case: fresh
            # or just-measured qubits) and the outcome is its sign bit
            d = self.xs[q] & ((1 << self.n) - 1)
            if d and d & (d - 1) == 0:
                r = self.n + d.bit_length() - 1
                outcome = -1 if (self.e2 >> r) & 1 else 1
                if force is not None and force != outcome:
                    raise ValueError("forced outcome has zero probability")
                return outcome, True
        return self.measure_pauli(PauliOperator.single(self.n, q, "Z"),
                                  rng=rng, force=force)

    def reset(self, q: int, rng=None):
        outcome, _ = self.measure_z(q, rng=rng)
        if outcome == -1:
            self.x(q)

    # -- canonical form ----------------------------------------------------

    def canonical_form(self) -> tuple[PauliOperator, ...]:
        """Unique row-reduced generating set of the stabilizer group.

        Two tableaus describe the same state iff their canonical forms are
        identical.  Columns are eliminated in the fixed order x_0..x_{n-1},
        z_0..z_{n-1}.
        """
        n = self.n
        rows = [list(self._row(n + i)) for i in range(n)]

        def mul_into(t, s):
            t[2] = (t[2] + s[2] + 2 * _parity(t[1] & s[0])) & 3
            t[0] ^= s[0]
            t[1] ^= s[1]

        pivot = 0
        for col in range(2 * n):
            comp, bit = (0, 1 << col) if col < n else (1, 1 << (col - n))
            src = next((i for i in range(pivot, n) if rows[i][comp] & bit), None)
            if src is None:
                continue
            rows[pivot], rows[src] = rows[src], rows[pivot]
            for i in range(n):
                if i != pivot and rows[i][comp] & bit:
                    mul_into(rows[i], rows[pivot])
            pivot += 1
            if pivot == n:
                break
        return tuple(PauliOperator(n, x, z, e) for x, z, e in rows)

    def same_state(self, other: "StabilizerTableau") -> bool:
        return self.canonical_form() == other.canonical_form()

    # -- invariants --------------------------------------------------------

    def check_invariants(self):
        """Commutation, destabilizer pairing, and real signs on all rows."""
        n = self.n
        stab = self.stabilizer_rows()
        destab = self.destabilizer_rows()
        for i in range(n):
            if not stab[i].is_hermitian() or stab[i].sign not in (1, -1):
                raise AssertionError(f"stabilizer row {i} has imaginary sign")
            for j in range(i + 1, n):
                if not stab[i].commutes(stab[j]):
                    raise AssertionError(f"stabilizer rows {i},{j} anticommute")
            for j in range(n):
                want = i != j
                if destab[j].commutes(stab[i]) != want:
                    raise AssertionError(f"destabilizer pairing broken at {i},{j}")

    def __str__(self) -> str:
        return "\n".join(str(r) for r in self.stabilizer_rows())


class _FastTableau(StabilizerTableau):
    """Kernel-backed representation: ``xs``/``zs`` are int64 arrays and
    the phase bitplanes live in ``ph`` (ph[0] = e1, ph[1] = e2).  All
    semantics match the base class exactly."""

    def __init__(self, n_qubits: int):
        import numpy as np
        self.n = n_qubits
        self.xs = np.array([1 << q for q in range(n_qubits)], dtype=np.int64)
        self.zs = np.array([1 << (n_qubits + q) for q in range(n_qubits)],
                           dtype=np.int64)
        self.ph = np.zeros(2, dtype=np.int64)

    @property
    def e1(self) -> int:
        return int(self.ph[0])

    @property
    def e2(self) -> int:
        return int(self.ph[1])

    def copy(self) -> "_FastTableau":
        t = object.__new__(_FastTableau)
        t.n = self.n
        t.xs = self.xs.copy()
        t.zs = self.zs.copy()
        t.ph = self.ph.copy()
        return t

    # -- gates -------------------------------------------------------------

    def h(self, q: int):
        self._check(q)
        _k.k_h(self.xs, self.zs, self.ph, q)

    def s(self, q: int):
        self._check(q)
        _k.k_s(self.xs, self.zs, self.ph, q)

    def x(self, q: int):
        self._check(q)
        _k.k_x(self.xs, self.zs, self.ph, q)

    def y(self, q: int):
        self._check(q)
        _k.k_y(self.xs, self.zs, self.ph, q)

    def z(self, q: int):
        self._check(q)
        _k.k_z(self.xs, self.zs, self.ph, q)

    def cnot(self, c: int, t: int):
        self._check(c, t)
        if c == t:
            raise IndexError("control equals target")
        _k.k_cnot(self.xs, self.zs, self.ph, c, t)

    def cz(self, a: int, b: int):
        self._check(a, b)
        if a == b:
            raise IndexError("control equals target")
        _k.k_cz(self.xs, self.zs, self.ph, a, b)

    _GATES = {"H": h, "S": s, "SDG": StabilizerTableau.sdg, "X": x, "Y": y,
              "Z": z, "CNOT": cnot, "CZ": cz}

    # -- Pauli application and measurement ---------------------------------

    def _anticommute_mask(self, obs: PauliOperator) -> int:
        return int(_k.k_anticommute(self.xs, self.zs, obs.x, obs.z))

    def apply_pauli(self, obs: PauliOperator):
        if obs.n_qubits != self.n:
            raise ValueError("operator size mismatch")
        self.ph[1] ^= _k.k_anticommute(self.xs, self.zs, obs.x, obs.z)

    def _row(self, r: int) -> tuple[int, int, int]:
        x = z = 0
        for q in range(self.n):
            x |= ((int(self.xs[q]) >> r) & 1) << q
            z |= ((int(self.zs[q]) >> r) & 1) << q
        e = ((int(self.ph[0]) >> r) & 1) + 2 * ((int(self.ph[1]) >> r) & 1)
        return x, z, e

    def measure_pauli(self, obs: PauliOperator, rng=None, force=None):
        if obs.n_qubits != self.n:
            raise ValueError("operator size mismatch")
        if not obs.is_hermitian():
            raise ValueError("observable must have sign +1 or -1")
        m = _k.k_anticommute(self.xs, self.zs, obs.x, obs.z)
        if (m >> self.n) == 0:
            return self._det_outcome(obs, m, force), True
        if force is not None:
            outcome = force
        else:
            if rng is None:
                raise ValueError("random measurement outcome needs an rng")
            outcome = 1 if rng.random() < 0.5 else -1
        oe = (obs.phase_exp + (0 if outcome == 1 else 2)) & 3
        _k.k_measure_update(self.xs, self.zs, self.ph, self.n, m,
                            obs.x, obs.z, oe)
        return outcome, False

    def _deterministic_outcome(self, obs, m, force):
        return self._det_outcome(obs, int(m), force)

    def _det_outcome(self, obs, m, force):
        phase = _k.k_det_phase(self.xs, self.zs, self.ph, self.n, m)
        outcome = 1 if phase == obs.phase_exp else -1
        if force is not None and force != outcome:
            raise ValueError("forced outcome has zero probability")
        return outcome

    def measure_z(self, q: int, rng=None, force=None):
        self._check(q)
        outcome, m = _k.k_measure_z(self.xs, self.zs, self.ph, self.n, q)
        if outcome:
            if force is not None and force != outcome:
                raise ValueError("forced outcome has zero probability")
            return int(outcome), True
        if force is not None:
            outcome = force
        else:
            if rng is None:
                raise ValueError("random measurement outcome needs an rng")
            outcome = 1 if rng.random() < 0.5 else -1
        _k.k_measure_update(self.xs, self.zs, self.ph, self.n, m,
                            0, 1 << q, 0 if outcome == 1 else 2)
        return outcome, False
