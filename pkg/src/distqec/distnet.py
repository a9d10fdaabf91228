"""Discrete-event model of the two-node network.

Node presets with ion ledgers, heralded probabilistic Bell-link
generation, an optical-multiplexer resource model, and the timed
Bell-preparation trial: local EC cycles tick while the link is pending,
the encoded Bell protocol runs on delivery, and a noiseless readback
grades the trial.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .codes import decode_lookup, encode_zero, get_code
from .executor import Executor, _TWO_QUBIT_FAULTS
from .fault_tolerance import (VerificationError, ec_cycle_ft, ft_layout,
                              ft_required_qubits, prepare_encoded_zero_ft,
                              measure_joint_logical_ft_reconciled)
from .noise import ErrorModel
from .pauli import PauliOperator
from .tableau import StabilizerTableau
from .codes import apply_pauli_gates, reduce_logical
from .telegates import (JointMeasurementPlan, ec_cycle_basic, make_bell_link,
                        measure_joint_logical, standard_layout,
                        required_qubits)


# -- node ledgers ------------------------------------------------------------

@dataclass(frozen=True)
class NodeSpec:
    node_id: str
    code_name: str
    data_qubits: int
    local_ancilla: int
    interface_qubits: int

    @property
    def ledger_total(self) -> int:
        return self.data_qubits + self.local_ancilla + self.interface_qubits


def node_preset(name: str, node_id: str = "node") -> NodeSpec:
    try:
        data, local, iface, code_name = _NODE_PRESETS[name]
    except KeyError:
        raise KeyError(
            f"unknown node preset {name!r}; known: {sorted(_NODE_PRESETS)}"
        ) from None
    return NodeSpec(node_id, code_name, data, local, iface)


# data + local ancilla + interface; totals match the architecture ledgers:
# 7 ions for the basic node, 10 with local FT extraction, 14 for the full
# FT node, 39 for the Steane-code chip (7 data + 4*7 ancilla blocks + 4)
_NODE_PRESETS = {
    "513-basic": (5, 1, 1, "513"),
    "513-ft-local": (5, 5, 0, "513"),
    "513-ft": (5, 5, 4, "513"),
    "steane-chip": (7, 28, 4, "steane713"),
}


# -- link channel and timeline -----------------------------------------------

@dataclass(frozen=True)
class LinkChannel:
    p_success: float       # per-attempt heralding probability, (0, 1]
    t_attempt: float = 1.0
    bell_error: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.p_success <= 1.0:
            raise ValueError("p_success must be in (0, 1]")
        if self.t_attempt <= 0:
            raise ValueError("t_attempt must be positive")
        if not 0.0 <= self.bell_error <= 1.0:
            raise ValueError("bell_error must be in [0, 1]")


class EventTimeline:
    """Monotonic event queue; FIFO among events at equal times."""

    def __init__(self):
        self.current_time = 0.0
        self._heap: list[tuple[float, int, object]] = []
        self._seq = 0

    def schedule(self, time: float, payload) -> None:
        if time < self.current_time:
            raise ValueError("cannot schedule into the past")
        heapq.heappush(self._heap, (time, self._seq, payload))
        self._seq += 1

    def advance(self):
        """Pop the next event, advancing the clock to it."""
        if not self._heap:
            raise IndexError("timeline is empty")
        time, _, payload = heapq.heappop(self._heap)
        self.current_time = time
        return time, payload

    def __len__(self) -> int:
        return len(self._heap)


@dataclass
class MultiplexerState:
    """Optical switchyard: any node pair may entangle, limited by detector
    resources and each node's free interface qubits."""
    interface_free: dict[str, int]
    detectors: int
    active: set = field(default_factory=set)
    waiting: deque = field(default_factory=deque)

    def _can_start(self, a: str, b: str) -> bool:
        return (len(self.active) < self.detectors
                and self.interface_free.get(a, 0) > 0
                and self.interface_free.get(b, 0) > 0)

    def schedule_pair(self, a: str, b: str) -> bool:
        """Reserve resources for pair generation; False = queued (FIFO),
        never dropped."""
        if self._can_start(a, b):
            self.active.add((a, b))
            self.interface_free[a] -= 1
            self.interface_free[b] -= 1
            return True
        self.waiting.append((a, b))
        return False

    def release_pair(self, a: str, b: str) -> list[tuple[str, str]]:
        """Finish a generation; promote as many queued requests as now fit.
        Returns the promoted pairs in FIFO order."""
        self.active.discard((a, b))
        self.interface_free[a] += 1
        self.interface_free[b] += 1
        promoted = []
        still_waiting = deque()
        while self.waiting:
            pa, pb = self.waiting.popleft()
            if self._can_start(pa, pb):
                self.active.add((pa, pb))
                self.interface_free[pa] -= 1
                self.interface_free[pb] -= 1
                promoted.append((pa, pb))
            else:
                still_waiting.append((pa, pb))
        self.waiting = still_waiting
        return promoted


@dataclass(frozen=True)
class BellDelivery:
    delivery_time: float
    attempts: int
    error: PauliOperator | None   # two-qubit Pauli on the delivered pair


def geometric_attempts(p_success: float, u: float) -> int:
    """Inverse-CDF geometric draw from one uniform."""
    if p_success >= 1.0:
        return 1
    return 1 + int(np.log1p(-u) / np.log1p(-p_success))


def draw_link_error(bell_error: float, rng) -> PauliOperator | None:
    if bell_error > 0 and rng.random() < bell_error:
        pair = _TWO_QUBIT_FAULTS[int(rng.random() * 15) % 15]
        return PauliOperator.from_string("".join(pair))
    return None


def attempt_bell_link(channel: LinkChannel, pair: tuple[str, str], rng,
                      timeline: EventTimeline) -> BellDelivery:
    """Heralded link generation: geometric retry, delivery scheduled on the
    timeline, delivered-pair error drawn post-heralding."""
    attempts = geometric_attempts(channel.p_success, rng.random())
    delivery = timeline.current_time + attempts * channel.t_attempt
    event = BellDelivery(delivery, attempts,
                         draw_link_error(channel.bell_error, rng))
    timeline.schedule(delivery, ("bell_delivered", pair, event))
    return event


# -- timed Bell-preparation trial --------------------------------------------

@dataclass(frozen=True)
class TrialRecord:
    trial_index: int
    wait_time: float
    link_attempts: int
    n_ec_cycles: int
    ec_mode: str
    heralded_abort: bool
    logical_error: bool
    eigenvalue: int               # 0 when aborted
    bell_links_used: int
    verification_retries: int
    syndrome_history: tuple[tuple[int, ...], ...]   # resolved, per EC cycle
    elapsed_time: float

    def to_dict(self) -> dict:
        return {
            "trial_index": self.trial_index,
            "wait_time": self.wait_time,
            "link_attempts": self.link_attempts,
            "n_ec_cycles": self.n_ec_cycles,
            "ec_mode": self.ec_mode,
            "heralded_abort": self.heralded_abort,
            "logical_error": self.logical_error,
            "eigenvalue": self.eigenvalue,
            "bell_links_used": self.bell_links_used,
            "verification_retries": self.verification_retries,
            "syndrome_history": [list(s) for s in self.syndrome_history],
            "elapsed_time": self.elapsed_time,
        }


def _grade_bell_state(state, code, data_a, data_b) -> bool:
    """Noiseless readback: perfect lookup decode of each block, then check
    the XbarXbar and ZbarZbar correlators.  True = logical error."""
    nq = state.n_qubits
    for blk in (data_a, data_b):
        bits = tuple((1 - state.peek_observable(g.embed(nq, blk))) // 2
                     for g in code.generators)
        corr = decode_lookup(bits, code)
        if not corr.is_identity():
            state.apply_pauli(corr.embed(nq, blk))
    xo, zo = code.logical_x[0], code.logical_z[0]
    xx = xo.embed(nq, data_a) * xo.embed(nq, data_b)
    zz = zo.embed(nq, data_a) * zo.embed(nq, data_b)
    return (state.peek_observable(xx) != 1
            or state.peek_observable(zz) != 1)


def run_timed_bell_prep(channel: LinkChannel, code_name: str, rng,
                        noise: ErrorModel | None = None,
                        ec_mode: str = "basic", ec_cycle_time: float = 1.0,
                        fixed_n: int | None = None, trial_index: int = 0,
                        max_attempts: int = 10) -> TrialRecord:
    """One timed trial: encode both nodes, run an EC cycle per elapsed
    ec_cycle_time while the heralded link is pending, then execute the
    encoded Bell preparation on delivery and grade by noiseless readback.
    """
    if ec_mode not in ("basic", "ft"):
        raise ValueError("ec_mode must be 'basic' or 'ft'")
    code = get_code(code_name)
    timeline = EventTimeline()
    mux = MultiplexerState({"a": 1, "b": 1}, detectors=1)
    mux.schedule_pair("a", "b")
    delivery = attempt_bell_link(channel, ("a", "b"), rng, timeline)
    wait = delivery.delivery_time - timeline.current_time
    n_cycles = fixed_n if fixed_n is not None else \
        (int(wait // ec_cycle_time) if ec_cycle_time > 0 else 0)

    def link_error_fn(ex):
        return draw_link_error(channel.bell_error, ex)

    links_used = 0
    eigenvalue = 0
    abort = False
    retries = 0
    history: list[tuple[int, ...]] = []
    if ec_mode == "basic":
        lay = standard_layout(code)
        nq = required_qubits(code)
        ex = Executor(StabilizerTableau(nq), rng=rng, noise=noise)
        enc = encode_zero(code.name)
        ex.run_circuit(enc, qubit_map=lay.data_a)
        ex.run_circuit(enc, qubit_map=lay.data_b)
        for cycle in range(n_cycles):
            ex.idle(lay.data_a + lay.data_b)
            ra = ec_cycle_basic(ex, code, lay.data_a, lay.anc_a, cycle)
            rb = ec_cycle_basic(ex, code, lay.data_b, lay.anc_b, cycle)
            history.append(ra.bits + rb.bits)
        timeline.advance()
        mux.release_pair("a", "b")
        make_bell_link(ex, *lay.bell, error=delivery.error)
        links_used = 1
        plan = JointMeasurementPlan(code.logical_x[0], code.logical_x[0],
                                    lay.data_a, lay.data_b, lay.bell)
        eigenvalue = measure_joint_logical(ex, plan, "bellprep")
        if eigenvalue == -1:
            apply_pauli_gates(ex, code.logical_z[0], lay.data_b)
        data_a, data_b = lay.data_a, lay.data_b
    else:
        lay = ft_layout(code)
        nq = ft_required_qubits(code)
        ex = Executor(StabilizerTableau(nq), rng=rng, noise=noise)
        try:
            pa = prepare_encoded_zero_ft(ex, code, lay.data_a, lay.ghz_a,
                                         lay.ver_a, max_attempts)
            pb = prepare_encoded_zero_ft(ex, code, lay.data_b, lay.ghz_b,
                                         lay.ver_b, max_attempts)
            retries += (pa - 1) + (pb - 1)
            for _ in range(n_cycles):
                ex.idle(lay.data_a + lay.data_b)
                la = ec_cycle_ft(ex, code, lay.data_a, lay.ghz_a, lay.ver_a,
                                 max_attempts)
                lb = ec_cycle_ft(ex, code, lay.data_b, lay.ghz_b, lay.ver_b,
                                 max_attempts)
                history.append(la.resolved + lb.resolved)
            timeline.advance()
            mux.release_pair("a", "b")
            joint = measure_joint_logical_ft_reconciled(
                ex, code, lay, "X", max_attempts, link_error_fn)
            eigenvalue = joint["eigenvalue"]
            links_used = joint["bell_links_used"]
            # each verified interface attempt consumes two links; attempts
            # beyond one per repetition were verification retries
            retries += links_used // 2 - len(joint["outcomes"])
            if eigenvalue == -1:
                apply_pauli_gates(ex, reduce_logical(code, "Z"), lay.data_b)
        except VerificationError:
            abort = True
        data_a, data_b = lay.data_a, lay.data_b

    logical = False
    if not abort:
        ex.noise = None
        logical = _grade_bell_state(ex.state, code, data_a, data_b)
    return TrialRecord(
        trial_index=trial_index, wait_time=wait,
        link_attempts=delivery.attempts, n_ec_cycles=n_cycles,
        ec_mode=ec_mode, heralded_abort=abort, logical_error=logical,
        eigenvalue=0 if abort else eigenvalue,
        bell_links_used=links_used,
        verification_retries=retries,
        syndrome_history=tuple(history),
        elapsed_time=wait)


def run_trials(channel: LinkChannel, code_name: str, n_trials: int,
               seed: int = 0, noise: ErrorModel | None = None,
               ec_mode: str = "basic", ec_cycle_time: float = 1.0,
               fixed_n: int | None = None,
               max_attempts: int = 10) -> list[TrialRecord]:
    """Monte Carlo batch; each trial owns an independent RNG stream derived
    from (seed, trial index), so results are reproducible and order
    independent."""
    root = np.random.SeedSequence(seed)
    records = []
    for idx, child in enumerate(root.spawn(n_trials)):
        rng = np.random.default_rng(child)
        records.append(run_timed_bell_prep(
            channel, code_name, rng, noise=noise, ec_mode=ec_mode,
            ec_cycle_time=ec_cycle_time, fixed_n=fixed_n, trial_index=idx,
            max_attempts=max_attempts))
    return records
