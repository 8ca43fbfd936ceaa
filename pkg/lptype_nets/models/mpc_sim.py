#!/usr/bin/env python3
"""
Massively parallel (MPC) execution of the meta-algorithm.

k = ⌈n^(1−δ)⌉ machines each hold ⌈n/k⌉ elements. Machine 0 coordinates.
Information moves along a fan-out f = ⌈n^δ⌉ tree: after t broadcast rounds
the first f^t machines hold a value, and aggregation runs the same tree
backwards, so both take ⌈log_f k⌉ rounds. One iteration is a down-sweep
of sample counts, one sample-and-send round, a basis broadcast and an
up-sweep of the weight histograms.

Every round has a per-machine bit budget: memory_cap slots of slot_bits
each, plus f times the largest message for the tree rounds (broadcast,
counts, aggregation). A machine that sends and receives more than that in
one round stops the run with MemoryExceeded.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from ..solvers.lptype import Basis, Element, SolutionValue
from ..solvers.meta_solver import IterationLoop, MetaTrace, Mode, epsilon_for, net_size
from ..solvers.problems import ProblemInstance
from ..solvers.small_solver import solve_small
from ..utils.codec import (BitReader, BitWriter, decode_sample, gamma_bits, max_element_bits,
                           uint_bits)
from ..utils.errors import MemoryExceeded, RangeError
from ..utils.precision import ExponentHistogram, WeightBase, ceil_rational_power
from ..utils.rng_streams import RngStreams
from .coord_sim import PartitionScheme, SiteState, partition

logger = logging.getLogger(__name__)


def sample_slot_bits(bit_s: int, m: int, n: int) -> int:
    """Bits one sampled element may take in a sample message.

    The element itself, its global index, its multiplicity and one message
    header (a sender ships at least one element per header).
    """
    return bit_s + uint_bits(n) + uint_bits(m) + gamma_bits(min(m, n))


@dataclass
class MpcConfig:
    delta: Fraction
    machine_count: int
    memory_cap: int
    fanout: int
    slot_bits: int = 0  # 0: element sizes unknown, rounds are metered but not capped

    def __post_init__(self):
        if self.fanout < 2:
            raise RangeError(f"fan-out must be at least 2, got {self.fanout}")
        if self.machine_count < 1:
            raise RangeError("need at least one machine")

    @classmethod
    def for_instance(cls, n: int, delta, m: int, d: int, nu: int,
                     memory_cap: Optional[int] = None, slot_bits: int = 0) -> 'MpcConfig':
        """k = ⌈n^(1−δ)⌉ machines, fan-out max(2, ⌈n^δ⌉).

        The default memory cap holds a machine's share, the distinct net
        elements and a basis plus the box.
        """
        delta = Fraction(delta)
        if not 0 < delta <= 1:
            raise RangeError(f"delta must lie in (0, 1], got {delta}")
        k = ceil_rational_power(n, 1 - delta)
        fanout = max(2, ceil_rational_power(n, delta))
        if memory_cap is None:
            memory_cap = -(-n // k) + min(m, n) + 2 * d + nu
        if k * memory_cap < n:
            raise RangeError(f"{k} machines with memory {memory_cap} cannot hold {n} elements")
        return cls(delta, k, int(memory_cap), fanout, slot_bits)

    @property
    def round_budget_bits(self) -> Optional[int]:
        """Per-machine bits of a round without tree traffic, or None when uncapped."""
        if self.slot_bits <= 0:
            return None
        return self.memory_cap * self.slot_bits

    @property
    def depth(self) -> int:
        """⌈log_f k⌉, the rounds of one broadcast or aggregation."""
        depth, reach = 0, 1
        while reach < self.machine_count:
            reach *= self.fanout
            depth += 1
        return depth

    def level(self, machine: int) -> int:
        """Broadcast round in which the machine first receives a value."""
        level, reach = 0, 1
        while machine >= reach:
            reach *= self.fanout
            level += 1
        return level

    def parent(self, machine: int) -> int:
        return machine % self.fanout ** (self.level(machine) - 1)

    def receivers(self, t: int) -> range:
        """Machines reached in broadcast round t."""
        return range(self.fanout ** (t - 1), min(self.machine_count, self.fanout ** t))

    def children(self, machine: int) -> List[int]:
        out = []
        for t in range(self.level(machine) + 1, self.depth + 1):
            step = self.fanout ** (t - 1)
            out.extend(range(machine + step, min(self.machine_count, step * self.fanout), step))
        return out


@dataclass
class MpcTrace:
    rounds: int
    max_load_bits: int
    config: MpcConfig
    r: int
    net_size_alg: int
    net_size_alt: int
    bit_s: int
    meta: MetaTrace
    m: int = 0
    headroom_bits: Optional[int] = None

    @property
    def iterations(self) -> int:
        return self.meta.iterations

    @property
    def slot_bits(self) -> int:
        return self.config.slot_bits

    @property
    def load_within_cap(self) -> bool:
        """No machine exceeded its round budget (unknown budgets count as kept)."""
        return self.headroom_bits is None or self.headroom_bits >= 0


class _Network:
    """Synchronous rounds with per-machine load metering and a hard round budget."""

    def __init__(self, config: MpcConfig):
        self.config = config
        self.rounds = 0
        self.max_load_bits = 0
        self.headroom_bits: Optional[int] = None
        self._load: Dict[int, int] = {}
        self._label = ""
        self._budget: Optional[int] = None

    def begin(self, label: str, tree_message_bits: int = 0):
        """Open a round; tree rounds pass their largest message size."""
        self.rounds += 1
        self._load = {}
        self._label = label
        base = self.config.round_budget_bits
        self._budget = None if base is None else base + self.config.fanout * tree_message_bits
        logger.debug("MPC round %d (%s), budget %s bits", self.rounds, label, self._budget)

    def send(self, src: int, dst: int, msg: BitWriter) -> BitReader:
        for machine in {src, dst}:
            self._load[machine] = self._load.get(machine, 0) + len(msg)
            load = self._load[machine]
            self.max_load_bits = max(self.max_load_bits, load)
            if self._budget is None:
                continue
            spare = self._budget - load
            if self.headroom_bits is None or spare < self.headroom_bits:
                self.headroom_bits = spare
            if spare < 0:
                raise MemoryExceeded(f"machine {machine} moved {load} bits in round "
                                     f"{self.rounds} ({self._label}), budget is {self._budget}")
        return msg.reader()

    def check_memory(self, machine: int, elements: int):
        if elements > self.config.memory_cap:
            raise MemoryExceeded(f"machine {machine} holds {elements} elements, "
                                 f"cap is {self.config.memory_cap}")


def broadcast(msg: BitWriter, config: MpcConfig, network: Optional[_Network] = None) -> int:
    """Spread a message from machine 0 to every machine; returns the rounds used.

    A machine sends to at most f−1 children per round, so its load stays
    within f·|msg| on top of the round budget.
    """
    network = network or _Network(config)
    for t in range(1, config.depth + 1):
        network.begin("broadcast", len(msg))
        for machine in config.receivers(t):
            network.send(config.parent(machine), machine, msg)
    return config.depth


def _encode(hists: Sequence[ExponentHistogram], base: Optional[WeightBase]) -> BitWriter:
    w = BitWriter()
    for h in hists:
        if base is None:
            w.write_histogram(h)
        else:
            w.write_weight(h, base)
    return w


def _decode(reader: BitReader, count: int, base: Optional[WeightBase]) -> List[ExponentHistogram]:
    if base is None:
        return [reader.read_histogram() for _ in range(count)]
    return [reader.read_weight_histogram() for _ in range(count)]


def _up_sweep(config: MpcConfig, local: Sequence[Sequence[ExponentHistogram]],
              network: _Network, base: Optional[WeightBase] = None
              ) -> List[List[ExponentHistogram]]:
    """Converge-cast of histogram tuples; returns every machine's subtree totals."""
    width = len(local[0])
    subtree = [list(h) for h in local]
    for t in range(config.depth, 0, -1):
        outgoing = {machine: _encode(subtree[machine], base) for machine in config.receivers(t)}
        network.begin("aggregate", max((len(msg) for msg in outgoing.values()), default=0))
        for machine, msg in outgoing.items():
            parent = config.parent(machine)
            received = _decode(network.send(machine, parent, msg), width, base)
            subtree[parent] = [a.merge(b) for a, b in zip(subtree[parent], received)]
    return subtree


def aggregate_weight(config: MpcConfig, histograms: Sequence[ExponentHistogram],
                     network: Optional[_Network] = None) -> Tuple[ExponentHistogram, int]:
    """Sum the machines' exponent histograms at machine 0.

    Returns:
        tuple: (global histogram, rounds used)
    """
    if len(histograms) != config.machine_count:
        raise ValueError(f"expected {config.machine_count} histograms, got {len(histograms)}")
    network = network or _Network(config)
    subtree = _up_sweep(config, [[h] for h in histograms], network)
    return subtree[0][0], config.depth


def _updated(total: ExponentHistogram, violators: ExponentHistogram,
             success: Optional[bool]) -> ExponentHistogram:
    if not success:
        return total
    return total.minus(violators).merge(violators.bumped())


def _split(count: int, parts: Sequence[ExponentHistogram], base: WeightBase, rng) -> List[int]:
    """Multinomial split of count over parts by conditional binomials."""
    out = [0] * len(parts)
    if count == 0:
        return out
    shares = base.shares(parts)
    remaining, mass = count, 1.0
    for j, share in enumerate(shares):
        if j == len(shares) - 1 or remaining == 0:
            out[j] = remaining
            break
        p = min(1.0, share / mass) if mass > 0 else 0.0
        out[j] = int(rng.binomial(remaining, p))
        remaining -= out[j]
        mass -= share
    return out


def _count_bucket(count: int) -> ExponentHistogram:
    """A violator count carried through the weight sweep as a b^0 bucket."""
    return ExponentHistogram({0: count})


def run_mpc(inst: ProblemInstance, delta, mode: Mode = Mode.LAS_VEGAS,
            rng: Union[RngStreams, int] = 0, memory_cap: Optional[int] = None,
            net_scale: Fraction = Fraction(1), max_iterations: Optional[int] = None
            ) -> Tuple[SolutionValue, Basis, MpcTrace]:
    """Run the meta-algorithm on ⌈n^(1−δ)⌉ machines with r = ⌈1/δ⌉.

    Raises:
        MemoryExceeded: A machine's resident elements exceed the memory cap,
            or its bits in one round exceed the round budget.

    Returns:
        tuple: (f(S), basis, trace)
    """
    streams = rng if isinstance(rng, RngStreams) else RngStreams(int(rng))
    definition = inst.definition
    elements = inst.elements
    n = len(elements)
    delta = Fraction(delta)
    r = min(max(1, math.ceil(1 / delta)), max(1, math.ceil(math.log2(n))))
    loop = IterationLoop(definition, n, r, mode, streams, net_scale, max_iterations)
    m = loop.params.m
    bit_s = max_element_bits(elements)
    config = MpcConfig.for_instance(n, delta, m, definition.d, definition.nu, memory_cap,
                                    sample_slot_bits(bit_s, m, n))
    base = loop.base
    network = _Network(config)
    machines: List[SiteState] = partition(inst, config.machine_count, PartitionScheme.CONTIGUOUS)
    for mach in machines:
        network.check_memory(mach.site_id, len(mach.local_elements))
    box = list(definition.box_elements())
    logger.debug("MPC: k=%d fanout=%d depth=%d cap=%d m=%d", config.machine_count,
                 config.fanout, config.depth, config.memory_cap, m)

    empty = ExponentHistogram()
    subtree = _up_sweep(config, [[mach.histogram(), empty, empty] for mach in machines],
                        network, base)
    success: Optional[bool] = None

    while True:
        it = loop.iteration
        # down-sweep: each machine splits its subtree's count over itself and its children
        counts = [0] * config.machine_count
        counts[0] = m
        machines[0].apply_outcome(success)
        for t in range(0, config.depth + 1):
            level = list(config.receivers(t)) if t > 0 else [0]
            if t > 0:
                outgoing = {}
                for machine in level:
                    msg = BitWriter()
                    msg.write_uint(counts[machine])
                    msg.write_bit(bool(success))
                    outgoing[machine] = msg
                network.begin("counts", max(len(msg) for msg in outgoing.values()))
                for machine, msg in outgoing.items():
                    reader = network.send(config.parent(machine), machine, msg)
                    counts[machine] = reader.read_uint()
                    machines[machine].apply_outcome(reader.read_bit())
            for machine in level:
                kids = config.children(machine)
                parts = [machines[machine].histogram()] + [
                    _updated(subtree[c][0], subtree[c][1], success) for c in kids]
                split = _split(counts[machine], parts,
                               base, streams.generator("machine", machine, "split", it))
                counts[machine] = split[0]
                for c, y in zip(kids, split[1:]):
                    counts[c] = y

        network.begin("sample")
        net: List[Tuple[int, Element]] = []
        for mach in machines:
            y = counts[mach.site_id]
            if y == 0:
                continue
            sample_rng = streams.generator("machine", mach.site_id, "sample", it)
            reply = network.send(mach.site_id, 0, mach.sample(y, base, sample_rng))
            for index, e, c in decode_sample(reply):
                net.extend([(index, e)] * c)
        candidates = list(dict.fromkeys([e for _, e in net] + box))
        network.check_memory(0, len(machines[0].local_elements) + len(candidates))
        value, basis = solve_small(candidates, definition, streams.generator("solve", it))

        msg = BitWriter()
        msg.write_basis(basis)
        broadcast(msg, config, network)
        received_basis = msg.reader().read_basis()
        for mach in machines:
            network.check_memory(mach.site_id, len(mach.local_elements) + len(basis))
            mach.violation_message(received_basis, base)

        subtree = _up_sweep(config, [[mach.histogram(), mach.histogram(mach.pending),
                                      _count_bucket(len(mach.pending))] for mach in machines],
                            network, base)
        hist_s, hist_v, violators = subtree[0]
        if loop.record([i for i, _ in net], basis, hist_v, hist_s, violators.size()):
            break
        success = loop.trace.records[-1].success

    loop.trace.exponents_consistent = all(mach.exponents_consistent(definition)
                                          for mach in machines)
    alt = definition.lam * ceil_rational_power(n, delta) * definition.nu ** 2
    alg = net_size(epsilon_for(definition.nu, n, r), definition.lam, loop.params.delta)
    trace = MpcTrace(network.rounds, network.max_load_bits, config, r, alg, alt,
                     bit_s, loop.trace, m, network.headroom_bits)
    logger.debug("MPC run: %d rounds, max load %d bits", trace.rounds, trace.max_load_bits)
    return value, basis, trace
