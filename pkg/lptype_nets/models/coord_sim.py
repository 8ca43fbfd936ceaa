#!/usr/bin/env python3
"""
Coordinator-model execution of the meta-algorithm.

k sites hold disjoint parts of the input and talk only to the coordinator.
Every iteration takes three rounds:

1. success bit of the previous iteration down, site weights w(S_i) up;
2. multinomial sample counts y_i down, the sampled elements up;
3. the net's basis down, the sites' violator weights w(V_i) up.

Every message is encoded with the bit codec and metered exactly.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..solvers.lptype import Basis, Element, ProblemDef, SolutionValue, violates
from ..solvers.meta_solver import IterationLoop, MetaTrace, Mode, NetRaces, exponent_of
from ..solvers.problems import ProblemInstance
from ..solvers.small_solver import solve_small
from ..utils.codec import BitReader, BitWriter, count_bits, decode_sample, encode_sample
from ..utils.precision import ExponentHistogram, WeightBase
from ..utils.rng_streams import RngStreams

logger = logging.getLogger(__name__)


class PartitionScheme(Enum):
    ROUND_ROBIN = "roundRobin"
    CONTIGUOUS = "contiguous"
    ADVERSARIAL_SORTED = "adversarialSorted"
    GIVEN = "given"


def element_key(e: Element) -> Tuple[Fraction, ...]:
    """Coordinate tuple used to sort elements."""
    if hasattr(e, 'a'):
        return e.a + (e.b,)
    if hasattr(e, 'x'):
        return e.x + (Fraction(e.y),)
    return e.p


def _contiguous(order: Sequence[int], k: int) -> List[List[int]]:
    size, extra = divmod(len(order), k)
    out, start = [], 0
    for i in range(k):
        stop = start + size + (1 if i < extra else 0)
        out.append(list(order[start:stop]))
        start = stop
    return out


@dataclass
class SiteState:
    """One site: its share of the input, exponents and the bases it has seen."""
    site_id: int
    indices: List[int]
    local_elements: List[Element]
    local_exponents: List[int] = field(default_factory=list)
    known_bases: List[Basis] = field(default_factory=list)
    pending: List[int] = field(default_factory=list, repr=False)
    received: Optional[Basis] = field(default=None, repr=False)

    def __post_init__(self):
        if not self.local_exponents:
            self.local_exponents = [0] * len(self.local_elements)

    def histogram(self, positions: Optional[Sequence[int]] = None) -> ExponentHistogram:
        if positions is None:
            return ExponentHistogram.from_exponents(self.local_exponents)
        return ExponentHistogram.from_exponents(self.local_exponents[j] for j in positions)

    def apply_outcome(self, success: Optional[bool]):
        """Bump the pending violators of the last received basis when its iteration succeeded."""
        if success and self.received is not None:
            self.known_bases.append(self.received)
            for j in self.pending:
                self.local_exponents[j] += 1
        self.pending = []
        self.received = None

    def weight_message(self, success: Optional[bool], base: WeightBase) -> BitWriter:
        """Apply the previous outcome, then report w(S_i)."""
        self.apply_outcome(success)
        msg = BitWriter()
        msg.write_weight(self.histogram(), base)
        return msg

    def draw(self, y: int, base: WeightBase, rng: np.random.Generator
             ) -> List[Tuple[int, Element, int]]:
        """y weighted local draws as distinct (global index, element, count) triples."""
        if y == 0 or not self.local_elements:
            return []
        races = NetRaces(y, rng)
        for j, a in enumerate(self.local_exponents):
            races.offer(j, float(a) * base.log_base)
        counts: Dict[int, int] = {}
        for j in races.winners():
            counts[j] = counts.get(j, 0) + 1
        return [(self.indices[j], self.local_elements[j], counts[j]) for j in sorted(counts)]

    def sample(self, y: int, base: WeightBase, rng: np.random.Generator) -> BitWriter:
        return encode_sample(self.draw(y, base, rng))

    def violation_message(self, basis: Basis, base: WeightBase) -> BitWriter:
        """Remember the received basis and its local violators; report w(V_i) and |V_i|."""
        self.received = basis
        self.pending = [j for j, e in enumerate(self.local_elements) if violates(basis.value, e)]
        msg = BitWriter()
        msg.write_weight(self.histogram(self.pending), base)
        msg.write_uint(len(self.pending))
        return msg

    def exponents_consistent(self, definition: ProblemDef) -> bool:
        return all(a == exponent_of(e, self.known_bases, definition)
                   for e, a in zip(self.local_elements, self.local_exponents))


def partition(inst: ProblemInstance, k: int,
              scheme: Union[PartitionScheme, str] = PartitionScheme.ROUND_ROBIN
              ) -> List[SiteState]:
    """Split the elements over k sites.

    roundRobin gives element i to site i mod k; contiguous cuts the input into
    k runs, the first n mod k one longer; adversarialSorted does the same
    after sorting by coordinates; given reads the site of every element from
    ``inst.meta["sites"]``.
    """
    if k < 1:
        raise ValueError(f"need at least one site, got k={k}")
    scheme = PartitionScheme(scheme)
    elements = inst.elements
    n = len(elements)
    if scheme is PartitionScheme.ROUND_ROBIN:
        groups = [list(range(i, n, k)) for i in range(k)]
    elif scheme is PartitionScheme.CONTIGUOUS:
        groups = _contiguous(range(n), k)
    elif scheme is PartitionScheme.GIVEN:
        sites = inst.meta.get("sites")
        if sites is None or len(sites) != n or any(not 0 <= s < k for s in sites):
            raise ValueError(f"instance has no valid site assignment for k={k}")
        groups = [[i for i in range(n) if sites[i] == s] for s in range(k)]
    else:
        order = sorted(range(n), key=lambda i: (element_key(elements[i]), i))
        groups = _contiguous(order, k)
    return [SiteState(i, g, [elements[j] for j in g]) for i, g in enumerate(groups)]


@dataclass
class CoordTrace:
    rounds: int
    bits_up: List[int]
    bits_down: List[int]
    weight_bits: List[int]
    count_bits: int
    meta: MetaTrace

    @property
    def total_bits(self) -> int:
        return sum(self.bits_up) + sum(self.bits_down)

    @property
    def iterations(self) -> int:
        return self.meta.iterations


class _Channel:
    """Round counter and per-site bit meters."""

    def __init__(self, k: int):
        self.rounds = 0
        self.bits_up = [0] * k
        self.bits_down = [0] * k
        self.weight_bits: List[int] = []
        self.count_bits = 0

    def exchange(self):
        self.rounds += 1
        logger.debug("coordinator round %d", self.rounds)

    def down(self, site: int, msg: BitWriter) -> BitReader:
        self.bits_down[site] += len(msg)
        return msg.reader()

    def up(self, site: int, msg: BitWriter) -> BitReader:
        self.bits_up[site] += len(msg)
        return msg.reader()


def coordinator_sample(sites: Sequence[SiteState], m: int, base: WeightBase,
                       streams: RngStreams, iteration: int = 0,
                       channel: Optional[_Channel] = None,
                       weights: Optional[Sequence[ExponentHistogram]] = None,
                       success: Optional[bool] = None
                       ) -> Tuple[List[Tuple[int, Element]], ExponentHistogram]:
    """Two-round weighted sampling of m elements at the coordinator.

    Round one collects w(S_i) from every site, round two sends the counts
    y_i ~ Multinomial(m, w(S_i)/w(S)) and receives the sampled elements.

    Returns:
        tuple: ((global index, element) pairs with repetition, total weight
        histogram)
    """
    channel = channel or _Channel(len(sites))
    if weights is None:
        channel.exchange()
        weights = []
        for site in sites:
            outcome = success
            if success is not None:
                outcome = channel.down(site.site_id, _bit(success)).read_bit()
            msg = site.weight_message(outcome, base)
            channel.weight_bits.append(len(msg))
            weights.append(channel.up(site.site_id, msg).read_weight_histogram())
    total = ExponentHistogram()
    for h in weights:
        total = total.merge(h)

    shares = base.shares(weights)
    counts = streams.generator("coord", "counts", iteration).multinomial(m, shares)
    channel.exchange()
    width = count_bits(m)
    net: List[Tuple[int, Element]] = []
    for site, y in zip(sites, counts):
        down = BitWriter()
        down.write_fixed(int(y), width)
        channel.count_bits += width
        y = channel.down(site.site_id, down).read_fixed(width)
        rng = streams.generator("site", site.site_id, "sample", iteration)
        reply = channel.up(site.site_id, site.sample(y, base, rng))
        for index, e, c in decode_sample(reply):
            net.extend([(index, e)] * c)
    return net, total


def _bit(flag: bool) -> BitWriter:
    w = BitWriter()
    w.write_bit(flag)
    return w


def run_coordinator(inst: ProblemInstance, k: int, r: int, mode: Mode = Mode.LAS_VEGAS,
                    rng: Union[RngStreams, int] = 0,
                    scheme: Union[PartitionScheme, str] = PartitionScheme.ROUND_ROBIN,
                    net_scale: Fraction = Fraction(1), max_iterations: Optional[int] = None
                    ) -> Tuple[SolutionValue, Basis, CoordTrace]:
    """Run the meta-algorithm with k sites and a coordinator.

    Returns:
        tuple: (f(S), basis, trace)
    """
    streams = rng if isinstance(rng, RngStreams) else RngStreams(int(rng))
    definition = inst.definition
    n = len(inst.elements)
    sites = partition(inst, k, scheme)
    loop = IterationLoop(definition, n, r, mode, streams, net_scale, max_iterations)
    base = loop.base
    box = list(definition.box_elements())
    channel = _Channel(k)
    success: Optional[bool] = None

    while True:
        net, total = coordinator_sample(sites, loop.params.m, base, streams, loop.iteration,
                                        channel, success=success)
        candidates = list(dict.fromkeys([e for _, e in net] + box))
        value, basis = solve_small(candidates, definition,
                                   streams.generator("solve", loop.iteration))

        channel.exchange()
        hist_v, violators = ExponentHistogram(), 0
        for site in sites:
            down = BitWriter()
            down.write_basis(basis)
            received = channel.down(site.site_id, down).read_basis()
            reply = channel.up(site.site_id, site.violation_message(received, base))
            hist_v = hist_v.merge(reply.read_weight_histogram())
            violators += reply.read_uint()
        if loop.record([i for i, _ in net], basis, hist_v, total, violators):
            break
        success = loop.trace.records[-1].success

    loop.trace.exponents_consistent = all(s.exponents_consistent(definition) for s in sites)
    trace = CoordTrace(channel.rounds, channel.bits_up, channel.bits_down,
                       channel.weight_bits, channel.count_bits, loop.trace)
    logger.debug("coordinator run: %d rounds, %d bits", trace.rounds, trace.total_bits)
    return value, basis, trace
