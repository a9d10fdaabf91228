"""Fault-tolerant ancilla machinery.

Local syndrome extraction uses a verified GHZ block so each ancilla qubit
touches exactly one data qubit; the whole syndrome is measured twice, a
third time on disagreement.  Inter-node operator measurements use a
verified 3+3-qubit interface block built from two Bell links, with the
second link consumed by the parity verification.
"""

from __future__ import annotations

from dataclasses import dataclass

from .codes import (StabilizerCode, SyndromeRecord, _controlled_factor,
                    apply_pauli_gates, decode_lookup, encode_zero,
                    reduce_logical)
from .executor import Executor
from .telegates import make_bell_link


class VerificationError(RuntimeError):
    """Ancilla verification kept failing; the trial is heralded as aborted."""


@dataclass(frozen=True)
class VerifiedAncillaBlock:
    kind: str                      # "local_ghz" or "interface3"
    qubits: tuple[int, ...]
    verification_attempts: int
    verified: bool


@dataclass(frozen=True)
class MajorityVoteLog:
    syndromes: tuple[SyndromeRecord, ...]
    resolved: tuple[int, ...]


def ancilla_count(wt: int, m: int) -> int:
    """Interface ancillas per node for an operator of reduced weight `wt`
    at concatenation level m: wt**m coupling qubits plus one verifier."""
    if wt < 1:
        raise ValueError("operator weight must be >= 1")
    if m < 0:
        raise ValueError("concatenation level must be >= 0")
    return wt ** m + 1


# -- verified GHZ block for local extraction ---------------------------------

def ghz_prep_once(ex: Executor, ghz: tuple[int, ...], verifier: int,
                  inspect=None) -> int:
    """One preparation attempt of (|0..0>+|1..1>)/sqrt(2) on `ghz`: chain of
    CNOTs, verifier checks the parity of the two chain ends.  Returns the
    verifier bit (0 = accept)."""
    for q in (*ghz, verifier):
        ex.reset(q)
    ex.apply_gate("H", ghz[0])
    for a, b in zip(ghz, ghz[1:]):
        ex.apply_gate("CNOT", a, b)
    ex.apply_gate("CNOT", ghz[0], verifier)
    ex.apply_gate("CNOT", ghz[-1], verifier)
    if inspect is not None:
        inspect(ex.state)
    return (1 - ex.measure_z(verifier)) // 2


def prepare_verified_ghz(ex: Executor, ghz: tuple[int, ...], verifier: int,
                         max_attempts: int = 10) -> VerifiedAncillaBlock:
    """Prepare a verified GHZ block, re-preparing on verifier outcome 1."""
    for attempt in range(1, max_attempts + 1):
        if ghz_prep_once(ex, ghz, verifier) == 0:
            return VerifiedAncillaBlock("local_ghz", ghz, attempt, True)
    raise VerificationError(
        f"GHZ verification failed {max_attempts} times")


def measure_generator_ft(ex: Executor, generator, data: tuple[int, ...],
                         ghz: tuple[int, ...], verifier: int,
                         max_attempts: int = 10) -> int:
    """One generator's syndrome bit via a verified GHZ block.

    Each GHZ qubit controls one data qubit; X-basis readout of the block
    gives the eigenvalue as the outcome parity.  Returns the syndrome bit.
    """
    support = generator.support
    block = ghz[:len(support)]
    prepare_verified_ghz(ex, block, verifier, max_attempts)
    for anc, local in zip(block, support):
        _controlled_factor(ex, generator.factor(local), anc, data[local])
    bit = 1 if generator.sign == -1 else 0   # fold the representative's sign
    for anc in block:
        ex.apply_gate("H", anc)
    for anc in block:
        bit ^= (1 - ex.measure_z(anc)) // 2
    return bit


def extract_syndrome_ft(ex: Executor, code: StabilizerCode,
                        data: tuple[int, ...], ghz: tuple[int, ...],
                        verifier: int, max_attempts: int = 10) -> MajorityVoteLog:
    """Whole syndrome via verified GHZ blocks, repeated for reliability.

    Two repetitions; a third on disagreement.  Resolution is the syndrome
    seen at least twice, falling back to the third (latest) when all three
    differ -- under a single fault the third repetition is fault-free.
    """
    def rep(idx: int) -> SyndromeRecord:
        bits = tuple(
            measure_generator_ft(ex, g, data, ghz, verifier, max_attempts)
            for g in code.generators)
        return SyndromeRecord(bits, idx, "fault_tolerant")

    r1, r2 = rep(0), rep(1)
    if r1.bits == r2.bits:
        return MajorityVoteLog((r1, r2), r1.bits)
    r3 = rep(2)
    resolved = r1.bits if r3.bits == r1.bits else r2.bits if r3.bits == r2.bits \
        else r3.bits
    return MajorityVoteLog((r1, r2, r3), resolved)


def ec_cycle_ft(ex: Executor, code: StabilizerCode, data: tuple[int, ...],
                ghz: tuple[int, ...], verifier: int,
                max_attempts: int = 10) -> MajorityVoteLog:
    log = extract_syndrome_ft(ex, code, data, ghz, verifier, max_attempts)
    correction = decode_lookup(log.resolved, code)
    if not correction.is_identity():
        apply_pauli_gates(ex, correction, data)
    return log


# -- two-Bell-link interface block -------------------------------------------

def interface_prep_once(ex: Executor, side_a: tuple[int, ...],
                        side_b: tuple[int, ...], v_pair: tuple[int, int],
                        link_error_fn=None, inspect=None) -> int:
    """One preparation attempt of the 3+3 interface state plus parity
    verification through a second Bell link.  Returns the verification
    parity (0 = even = accept)."""
    for q in (*side_a, *side_b, *v_pair):
        ex.reset(q)
    make_bell_link(ex, side_a[0], side_b[0],
                   error=link_error_fn(ex) if link_error_fn else None)
    for side in (side_a, side_b):
        for c, t in zip(side, side[1:]):
            ex.apply_gate("CNOT", c, t)
    make_bell_link(ex, *v_pair,
                   error=link_error_fn(ex) if link_error_fn else None)
    ex.apply_gate("CNOT", side_a[-1], v_pair[0])
    ex.apply_gate("CNOT", side_b[-1], v_pair[1])
    if inspect is not None:
        inspect(ex.state)
    va = (1 - ex.measure_z(v_pair[0])) // 2
    vb = (1 - ex.measure_z(v_pair[1])) // 2
    return va ^ vb


def prepare_interface_ancilla(ex: Executor, side_a: tuple[int, ...],
                              side_b: tuple[int, ...], v_pair: tuple[int, int],
                              max_attempts: int = 10, link_error_fn=None):
    """Repeat interface preparation until even verification parity.

    Consumes two Bell links per attempt.  Returns the verified block pair.
    """
    for attempt in range(1, max_attempts + 1):
        if interface_prep_once(ex, side_a, side_b, v_pair, link_error_fn) == 0:
            return (VerifiedAncillaBlock("interface3", side_a, attempt, True),
                    VerifiedAncillaBlock("interface3", side_b, attempt, True))
    raise VerificationError(
        f"interface verification failed {max_attempts} times")


def measure_joint_logical_ft(ex: Executor, code: StabilizerCode,
                             data_a: tuple[int, ...], data_b: tuple[int, ...],
                             side_a: tuple[int, ...], side_b: tuple[int, ...],
                             v_pair: tuple[int, int], which: str = "X",
                             max_attempts: int = 10, link_error_fn=None):
    """FT measurement of (reduced logical)_A (x) (reduced logical)_B.

    Every repetition consumes a freshly verified interface block (two Bell
    links); each coupling ancilla touches exactly one data qubit.  Measured
    two times, three on disagreement, majority-voted.

    Returns (eigenvalue, outcomes, attempts, bell_links_used).
    """
    reduced = reduce_logical(code, which)
    support = reduced.support
    if len(support) > len(side_a):
        raise ValueError("operator weight exceeds interface block size")
    sign_adjust = int(reduced.sign.real) ** 2
    outcomes: list[int] = []
    attempts = 0
    links = 0

    def one_rep() -> int:
        nonlocal attempts, links
        block_a, _ = prepare_interface_ancilla(
            ex, side_a, side_b, v_pair, max_attempts, link_error_fn)
        attempts += block_a.verification_attempts
        links += 2 * block_a.verification_attempts
        for side, data in ((side_a, data_a), (side_b, data_b)):
            for anc, local in zip(side, support):
                _controlled_factor(ex, reduced.factor(local), anc, data[local])
        ancillas = (*side_a[:len(support)], *side_b[:len(support)])
        parity = 0
        for anc in ancillas:
            ex.apply_gate("H", anc)
        for anc in ancillas:
            parity ^= (1 - ex.measure_z(anc)) // 2
        return (1 if parity == 0 else -1) * sign_adjust

    outcomes.append(one_rep())
    outcomes.append(one_rep())
    if outcomes[0] != outcomes[1]:
        outcomes.append(one_rep())
    eig = max(set(outcomes), key=outcomes.count)
    return eig, tuple(outcomes), attempts, links


def syndrome_round(ex: Executor, code: StabilizerCode, data: tuple[int, ...],
                   ghz: tuple[int, ...], verifier: int,
                   max_attempts: int = 10) -> tuple[int, ...]:
    """One single-pass syndrome readout (no correction applied)."""
    return tuple(measure_generator_ft(ex, g, data, ghz, verifier, max_attempts)
                 for g in code.generators)


def _majority_syndrome(h1, h2, h3):
    if h1 == h2 or h1 == h3:
        return h1
    if h2 == h3:
        return h2
    return h3


def measure_joint_logical_ft_reconciled(ex: Executor, code: StabilizerCode,
                                        lay: "FTLayout", which: str = "X",
                                        max_attempts: int = 10,
                                        link_error_fn=None) -> dict:
    """FT joint logical measurement with syndrome reconciliation.

    A data error that anticommutes with the measured operator flips every
    subsequent repetition, so repetition majority alone cannot be fault
    tolerant against it.  Interleaving operator repetitions with syndrome
    rounds (o1 s1 o2 s2 o3, a third syndrome round on any anomaly) locates
    such an error in time: the round where its syndrome first appears,
    against where the o-sequence flips, tells whether the recorded
    eigenvalue predates the error and must be negated.

    Fast path: after o1, one syndrome round, o2, accept immediately when
    the repetitions agree and the round is clean -- any single fault that
    could corrupt the content flips either the o-pair or the syndrome, so
    escalation to the full interleaved sequence (o3 plus two more rounds)
    is only ever triggered by a real anomaly.
    """
    reduced = reduce_logical(code, which)
    support = reduced.support
    zero = (0,) * (code.n - code.k)
    outcomes: list[int] = []
    links = 0

    def o_rep() -> int:
        nonlocal links
        block_a, _ = prepare_interface_ancilla(
            ex, lay.side_a, lay.side_b, lay.v_pair, max_attempts,
            link_error_fn)
        links += 2 * block_a.verification_attempts
        for side, data in ((lay.side_a, lay.data_a), (lay.side_b, lay.data_b)):
            for anc, local in zip(side, support):
                _controlled_factor(ex, reduced.factor(local), anc, data[local])
        ancillas = (*lay.side_a[:len(support)], *lay.side_b[:len(support)])
        parity = 0
        for anc in ancillas:
            ex.apply_gate("H", anc)
        for anc in ancillas:
            parity ^= (1 - ex.measure_z(anc)) // 2
        return 1 if parity == 0 else -1

    def s_round():
        return (syndrome_round(ex, code, lay.data_a, lay.ghz_a, lay.ver_a,
                               max_attempts),
                syndrome_round(ex, code, lay.data_b, lay.ghz_b, lay.ver_b,
                               max_attempts))

    outcomes.append(o_rep())
    h1 = s_round()
    outcomes.append(o_rep())
    o1, o2 = outcomes
    corrections = [None, None]
    rounds = [h1]
    if o1 == o2 and h1 == (zero, zero):
        content = o1
    else:
        h2 = s_round()
        outcomes.append(o_rep())
        o3 = outcomes[2]
        h3 = s_round()
        rounds += [h2, h3]
        content = max(set(outcomes), key=outcomes.count)
        explained = False
        for b, (data, local_op) in enumerate(
                ((lay.data_a, reduced), (lay.data_b, reduced))):
            hist = (h1[b], h2[b], h3[b])
            # per-bit majority: resilient to one corrupted round even when
            # all three whole strings differ (a real error's bits persist
            # in two rounds; single-round artifacts do not)
            resolved = tuple(1 if a + bb + c >= 2 else 0
                             for a, bb, c in zip(*hist))
            if resolved == zero:
                if sum(h != zero for h in hist) >= 2:
                    # distinct non-repeating syndromes across rounds: no
                    # single fault does this, and the record cannot be
                    # decoded -- herald the failure instead of guessing
                    raise VerificationError(
                        "conflicting syndrome rounds in joint measurement")
                continue
            corr = decode_lookup(resolved, code)
            # the resolved syndrome is trustworthy only when the middle
            # round reproduces it in full: any single fault that reaches
            # escalation predates round 2, so rounds 2 and 3 both show
            # its complete syndrome, while an error landing mid-round
            # leaves partial strings that fail this check
            if hist[1] != resolved:
                raise VerificationError(
                    "unstable syndrome record in joint measurement")
            if corr.commutes(local_op):
                if not corr.is_identity():
                    ex.state.apply_pauli(corr.embed(ex.state.n_qubits, data))
                    corrections[b] = corr
                continue
            if hist[2] == zero:
                # a real data error would still show in the final round;
                # agreeing nonzero earlier rounds with a clean last round
                # are measurement artifacts, so the o-record stands
                continue
            # the first round sharing any bit with the resolved syndrome
            # (a partial or corrupted record of it still overlaps) marks
            # when the error appeared: repetitions after round k saw the
            # flipped value, so un-flip them and take their agreement.
            # o_k itself is ambiguous (the error may pre- or postdate
            # its record), so disagreement of the other two is heralded
            # rather than guessed at.
            k = next((i for i, h in enumerate(hist, start=1)
                      if any(hb & rb for hb, rb in zip(h, resolved))),
                     next(i for i, h in enumerate(hist, start=1)
                          if h != zero))
            adj = [o * (-1 if j > k else 1)
                   for j, o in enumerate(outcomes, start=1)]
            others = [a for j, a in enumerate(adj, start=1) if j != k]
            if others[0] != others[1]:
                raise VerificationError(
                    "irreconcilable operator record in joint measurement")
            content = others[0]
            explained = True
            # the adjusted record is the eigenvalue of the corrected
            # state, so applying the correction keeps them consistent
            ex.state.apply_pauli(corr.embed(ex.state.n_qubits, data))
            corrections[b] = corr
        if len(set(outcomes)) > 1 and not explained:
            # repetition disagreement with no data error to pin it on
            # means at least one repetition misfired; a majority vote
            # would still lose to a second misfire, so herald instead
            raise VerificationError(
                "unexplained repetition disagreement in joint measurement")
    sign_adjust = int(reduced.sign.real) ** 2
    return {"eigenvalue": content * sign_adjust, "outcomes": tuple(outcomes),
            "bell_links_used": links,
            "corrections": tuple(corrections),
            "syndrome_rounds": tuple(rounds)}


# -- FT encoded state and Bell preparation -----------------------------------

def prepare_encoded_zero_ft(ex: Executor, code: StabilizerCode,
                            data: tuple[int, ...], ghz: tuple[int, ...],
                            verifier: int, max_attempts: int = 10) -> int:
    """Encode |0>_L and accept only on an all-zero verification syndrome.

    A nonzero syndrome resets the block and re-encodes: a single encoder
    fault can leave a weight-2 error whose lookup correction would be
    logical, so retrying is the fault-tolerant choice.  One repetition
    suffices here because no correction is applied: a fault inside the
    check either forces a harmless retry or deposits at most one data
    error (GHZ verification), while an encoder fault is read out
    faithfully.  Returns the number of attempts."""
    enc = encode_zero(code.name)
    # the reduced Zbar check separates |0>_L from |1>_L: both have zero
    # syndrome, and a pre-encoder X fault produces the latter outright
    checks = (*code.generators, reduce_logical(code, "Z"))
    for attempt in range(1, max_attempts + 1):
        for q in data:
            ex.reset(q)
        ex.run_circuit(enc, qubit_map=data)
        if all(measure_generator_ft(ex, g, data, ghz, verifier,
                                    max_attempts) == 0
               for g in checks):
            return attempt
    raise VerificationError(
        f"encoded-zero verification failed {max_attempts} times")


@dataclass(frozen=True)
class FTLayout:
    data_a: tuple[int, ...]
    data_b: tuple[int, ...]
    ghz_a: tuple[int, ...]
    ver_a: int
    ghz_b: tuple[int, ...]
    ver_b: int
    side_a: tuple[int, ...]
    side_b: tuple[int, ...]
    v_pair: tuple[int, int]


def ft_layout(code: StabilizerCode) -> FTLayout:
    n = code.n
    ghz_w = max((g.weight for g in code.generators), default=2)
    c = iter(range(2 * n, 2 * n + 2 * (ghz_w + 1) + 8))
    ghz_a = tuple(next(c) for _ in range(ghz_w))
    ver_a = next(c)
    ghz_b = tuple(next(c) for _ in range(ghz_w))
    ver_b = next(c)
    side_a = tuple(next(c) for _ in range(3))
    side_b = tuple(next(c) for _ in range(3))
    v_pair = (next(c), next(c))
    return FTLayout(tuple(range(n)), tuple(range(n, 2 * n)),
                    ghz_a, ver_a, ghz_b, ver_b, side_a, side_b, v_pair)


def ft_required_qubits(code: StabilizerCode) -> int:
    lay = ft_layout(code)
    return lay.v_pair[1] + 1


def prepare_encoded_bell_ft(ex: Executor, code: StabilizerCode,
                            layout: FTLayout | None = None,
                            n_ec_cycles: int = 0, max_attempts: int = 10,
                            link_error_fn=None) -> dict:
    """Fault-tolerant encoded Bell preparation across two nodes.

    FT |0>_L preparation in each node, optional FT EC cycles, then an FT
    joint measurement of the reduced XbarXbar with Zbar frame correction on
    node B for a -1 outcome.  Returns per-stage statistics.
    """
    lay = layout if layout is not None else ft_layout(code)
    prep_a = prepare_encoded_zero_ft(ex, code, lay.data_a, lay.ghz_a,
                                     lay.ver_a, max_attempts)
    prep_b = prepare_encoded_zero_ft(ex, code, lay.data_b, lay.ghz_b,
                                     lay.ver_b, max_attempts)
    for _ in range(n_ec_cycles):
        ec_cycle_ft(ex, code, lay.data_a, lay.ghz_a, lay.ver_a, max_attempts)
        ec_cycle_ft(ex, code, lay.data_b, lay.ghz_b, lay.ver_b, max_attempts)
    joint = measure_joint_logical_ft_reconciled(
        ex, code, lay, "X", max_attempts, link_error_fn)
    if joint["eigenvalue"] == -1:
        apply_pauli_gates(ex, reduce_logical(code, "Z"), lay.data_b)
    joint["prep_attempts"] = (prep_a, prep_b)
    return joint
