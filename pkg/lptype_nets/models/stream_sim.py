#!/usr/bin/env python3
"""
Multi-pass streaming execution of the meta-algorithm.

The machine never stores weights. It keeps the bases of the successful
iterations and recomputes an element's exponent, the number of stored bases
it violates, whenever the element passes by. Each iteration takes a sampling
pass (weighted reservoirs) and a violation pass; the fused variant does both
in one pass by sampling under both outcomes of the pending success check.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..solvers.lptype import Basis, Element, ProblemDef, SolutionValue, violates
from ..solvers.meta_solver import IterationLoop, MetaTrace, Mode, NetRaces, exponent_of
from ..solvers.problems import ProblemInstance
from ..utils.codec import BitWriter, element_bits
from ..utils.errors import StreamAccessError, VerificationFailure
from ..utils.precision import ExponentHistogram, WeightBase
from ..utils.rng_streams import RngStreams

logger = logging.getLogger(__name__)

Source = Union[Sequence[Element], Callable[[], Iterable[Element]]]


class ElementStream:
    """Sequential, pass-based access to the elements of an instance.

    Reads are only allowed inside an open pass and must move forward:
    ``read()`` returns the next element, ``read_at(i)`` skips ahead to index i.
    """

    def __init__(self, source: Source, n: Optional[int] = None):
        self._source = source
        if n is None:
            if callable(source):
                raise ValueError("a callable stream source needs an explicit length n")
            n = len(source)
        self.n = int(n)
        self.passes = 0
        self._iter = None
        self._position = -1

    @property
    def is_open(self) -> bool:
        return self._iter is not None

    def open_pass(self):
        if self.is_open:
            raise StreamAccessError("a pass is already open")
        items = self._source() if callable(self._source) else self._source
        self._iter = iter(enumerate(items))
        self._position = -1
        self.passes += 1
        logger.debug("pass %d opened", self.passes)

    def close_pass(self):
        if not self.is_open:
            raise StreamAccessError("no open pass to close")
        self._iter = None
        logger.debug("pass %d closed after index %d", self.passes, self._position)

    def read(self) -> Optional[Tuple[int, Element]]:
        """Next (index, element), or None at the end of the pass."""
        if not self.is_open:
            raise StreamAccessError("read outside an open pass")
        item = next(self._iter, None)
        if item is not None:
            self._position = item[0]
        return item

    def read_at(self, index: int) -> Element:
        if not self.is_open:
            raise StreamAccessError("read outside an open pass")
        if index <= self._position:
            raise StreamAccessError(f"index {index} requested after index {self._position}")
        while True:
            item = self.read()
            if item is None:
                raise StreamAccessError(f"index {index} is past the end of the stream")
            if item[0] == index:
                return item[1]

    def scan(self) -> Iterable[Tuple[int, Element]]:
        """Iterate over one whole pass."""
        self.open_pass()
        try:
            while True:
                item = self.read()
                if item is None:
                    return
                yield item
        finally:
            self.close_pass()


class _Reservoir:
    """NetRaces plus the elements currently holding a race."""

    def __init__(self, m: int, rng: np.random.Generator):
        self.races = NetRaces(m, rng)
        self.held: Dict[int, Tuple[Element, int]] = {}

    def offer(self, index: int, e: Element, log_weight: float) -> bool:
        """Offer an element; True when it won at least one race."""
        before = self.races.best_index.copy()
        self.races.offer(index, log_weight)
        if np.array_equal(before, self.races.best_index):
            return False
        winners = set(self.races.winners())
        self.held = {i: x for i, x in self.held.items() if i in winners}
        self.held[index] = (e, element_bits(e))
        return True

    def elements(self) -> Dict[int, Element]:
        return {i: e for i, (e, _) in self.held.items()}

    def winners(self) -> List[int]:
        return self.races.winners()


def weighted_reservoir_pass(stream: ElementStream, bases: Sequence[Basis], m: int,
                            definition: ProblemDef, r: int, rng: np.random.Generator
                            ) -> List[int]:
    """One pass drawing m independent weighted samples.

    Element weights are n^(a/r) with a the number of bases violated; the
    marginals equal those of ``sample_net`` on the same weights.
    """
    base = WeightBase(stream.n, r)
    reservoir = _Reservoir(m, rng)
    for i, e in stream.scan():
        reservoir.offer(i, e, float(exponent_of(e, bases, definition)) * base.log_base)
    return reservoir.winners()


@dataclass
class StreamTrace:
    passes: int
    peak_stored_elements: int
    peak_stored_bases: int
    peak_bits: int
    fused: bool
    meta: MetaTrace

    @property
    def iterations(self) -> int:
        return self.meta.iterations


class _Meter:
    def __init__(self):
        self.peak_elements = 0
        self.peak_bits = 0
        self.basis_bits = 0
        self.bases = 0

    def store_basis(self, basis: Basis):
        w = BitWriter()
        w.write_basis(basis)
        self.basis_bits += len(w)
        self.bases += 1

    def observe(self, reservoirs: Sequence[_Reservoir], fixed: Dict[int, Tuple[Element, int]]):
        held = dict(fixed)
        for res in reservoirs:
            held.update(res.held)
        self.peak_elements = max(self.peak_elements, len(held))
        bits = sum(b for _, b in held.values()) + self.basis_bits
        self.peak_bits = max(self.peak_bits, bits)


def run_streaming(inst: ProblemInstance, r: int, mode: Mode = Mode.LAS_VEGAS,
                  rng: Union[RngStreams, int] = 0, fused: bool = False,
                  net_scale: Fraction = Fraction(1), max_iterations: Optional[int] = None,
                  stream: Optional[ElementStream] = None
                  ) -> Tuple[SolutionValue, Basis, StreamTrace]:
    """Run the meta-algorithm over sequential passes.

    With the same seed the basis sequence equals ``run_meta``'s, fused or not.

    Returns:
        tuple: (f(S), basis, trace)
    """
    streams = rng if isinstance(rng, RngStreams) else RngStreams(int(rng))
    stream = stream or ElementStream(inst.elements)
    definition = inst.definition
    loop = IterationLoop(definition, stream.n, r, mode, streams, net_scale, max_iterations)
    runner = _StreamRunner(stream, loop, definition)
    basis = runner.run_fused() if fused else runner.run_two_pass()
    trace = StreamTrace(stream.passes, runner.meter.peak_elements, runner.meter.bases,
                        runner.meter.peak_bits, fused, loop.trace)
    logger.debug("streaming run: %d passes, %d iterations", trace.passes, trace.iterations)
    return basis.value, basis, trace


class _StreamRunner:
    def __init__(self, stream: ElementStream, loop: IterationLoop, definition: ProblemDef):
        self.stream = stream
        self.loop = loop
        self.definition = definition
        self.box = set(definition.box_elements())
        self.fixed: Dict[int, Tuple[Element, int]] = {}
        self.meter = _Meter()
        self._net: List[int] = []
        self.consistent = True
        self._expected = ExponentHistogram({0: stream.n})

    def exponent(self, e: Element) -> int:
        return exponent_of(e, self.loop.stored_bases, self.definition)

    def log_weight(self, exponent: int) -> float:
        return float(exponent) * self.loop.base.log_base

    def note_fixed(self, i: int, e: Element):
        if e in self.box and i not in self.fixed:
            self.fixed[i] = (e, element_bits(e))
            self.loop.always_include.append(i)

    def solve(self, reservoir: _Reservoir) -> Basis:
        self._net = reservoir.winners()
        held = {i: e for i, (e, _) in self.fixed.items()}
        held.update(reservoir.elements())
        return self.loop.solve_net(self._net, held)

    def sampling_pass(self) -> _Reservoir:
        reservoir = _Reservoir(self.loop.params.m, self.loop.sample_rng())
        for i, e in self.stream.scan():
            self.note_fixed(i, e)
            if reservoir.offer(i, e, self.log_weight(self.exponent(e))):
                self.meter.observe([reservoir], self.fixed)
        self.meter.observe([reservoir], self.fixed)
        return reservoir

    def record(self, basis: Basis, hist_v: ExponentHistogram, hist_s: ExponentHistogram,
               count: int) -> bool:
        """Hand the pass totals to the loop and check them against the bookkeeping.

        The total histogram recomputed from the stored bases must equal the
        previous total with the previous violators bumped (after a success)
        or unchanged (after a failure).
        """
        if hist_s != self._expected:
            self.consistent = False
            logger.warning("iteration %d: recomputed weights differ from the updated totals",
                           self.loop.iteration)
        stored = len(self.loop.stored_bases)
        done = self.loop.record(self._net, basis, hist_v, hist_s, count)
        if len(self.loop.stored_bases) > stored:
            self.meter.store_basis(basis)
            self._expected = hist_s.minus(hist_v).merge(hist_v.bumped())
        else:
            self._expected = hist_s
        return done

    def run_two_pass(self) -> Basis:
        while True:
            basis = self.solve(self.sampling_pass())
            hist_v, hist_s, count = ExponentHistogram(), ExponentHistogram(), 0
            for _, e in self.stream.scan():
                a = self.exponent(e)
                hist_s.add(a)
                if violates(basis.value, e):
                    hist_v.add(a)
                    count += 1
            if self.record(basis, hist_v, hist_s, count):
                break

        final = ExponentHistogram()
        for _, e in self.stream.scan():
            if violates(basis.value, e):
                raise VerificationFailure("confirmation pass found a violator")
            final.add(self.exponent(e))
        self.loop.trace.exponents_consistent = self.consistent and final == hist_s
        return basis

    def run_fused(self) -> Basis:
        basis = self.solve(self.sampling_pass())
        while True:
            upcoming = self.loop.iteration + 1
            m = self.loop.params.m
            # equal seeds: the kept reservoir reproduces the two-pass draw
            if_success = _Reservoir(m, self.loop.streams.generator("sample", upcoming))
            if_failure = _Reservoir(m, self.loop.streams.generator("sample", upcoming))
            hist_v, hist_s, count = ExponentHistogram(), ExponentHistogram(), 0
            for i, e in self.stream.scan():
                a = self.exponent(e)
                hist_s.add(a)
                bad = violates(basis.value, e)
                if bad:
                    hist_v.add(a)
                    count += 1
                won = if_success.offer(i, e, self.log_weight(a + 1 if bad else a))
                won = if_failure.offer(i, e, self.log_weight(a)) or won
                if won:
                    self.meter.observe([if_success, if_failure], self.fixed)
            if self.record(basis, hist_v, hist_s, count):
                self.loop.trace.exponents_consistent = self.consistent
                return basis
            success = self.loop.trace.records[-1].success
            basis = self.solve(if_success if success else if_failure)
