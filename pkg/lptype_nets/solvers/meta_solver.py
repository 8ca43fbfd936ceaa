#!/usr/bin/env python3
"""
The sampling meta-algorithm for LP-type problems.

Each iteration draws a weighted net of m elements, solves it exactly, scans
all elements for violators and, when the violators carry at most an
ε-fraction of the total weight, multiplies their weights by n^(1/r). The loop
ends when nothing violates the net's optimum, which is then f(S).
"""

import logging
import math
from dataclasses import dataclass, field
from decimal import ROUND_CEILING, Decimal, localcontext
from enum import Enum
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from ..utils.errors import MonteCarloFail, RangeError
from ..utils.precision import (DECIMAL_DIGITS, ExponentHistogram, WeightBase, decimal_ln,
                               integer_root, to_decimal)
from ..utils.rng_streams import RngStreams
from .lptype import Basis, Element, ProblemDef, SolutionValue, violates
from .problems import ProblemInstance, violation_scan
from .small_solver import solve_small

logger = logging.getLogger(__name__)

LAS_VEGAS_DELTA = Fraction(2, 3)


class Mode(Enum):
    LAS_VEGAS = "las-vegas"
    MONTE_CARLO = "monte-carlo"


def epsilon_for(nu: int, n: int, r: int) -> Union[Fraction, Decimal]:
    """ε = 1/(10·ν·n^(1/r)); exact when n^(1/r) is an integer.

    Raises:
        RangeError: r outside [1, ⌈log₂ n⌉], n < 2 or nu < 1.
    """
    if n < 2 or nu < 1:
        raise RangeError(f"need n >= 2 and nu >= 1 (got n={n}, nu={nu})")
    limit = max(1, math.ceil(math.log2(n)))
    if not 1 <= r <= limit:
        raise RangeError(f"r={r} outside [1, {limit}] for n={n}")
    root = integer_root(n, r)
    if root is not None:
        return Fraction(1, 10 * nu * root)
    with localcontext() as ctx:
        ctx.prec = DECIMAL_DIGITS
        return 1 / (10 * nu * (decimal_ln(n) / r).exp())


def net_size(epsilon, lam: int, delta) -> int:
    """⌈max(8λ/ε·ln(8λ/ε), 4/ε·ln(2/δ))⌉ with the natural logarithm."""
    eps = to_decimal(epsilon)
    dlt = to_decimal(delta)
    if not (0 < eps < 1 and 0 < dlt < 1 and lam >= 1):
        raise RangeError(f"net size needs 0 < ε < 1, 0 < δ < 1, λ >= 1 (got {epsilon}, {delta}, {lam})")
    with localcontext() as ctx:
        ctx.prec = DECIMAL_DIGITS
        first = 8 * lam / eps
        first = first * first.ln()
        second = 4 / eps * (2 / dlt).ln()
        return int(max(first, second).to_integral_value(rounding=ROUND_CEILING))


@dataclass
class NetParams:
    epsilon: Union[Fraction, Decimal]
    lam: int
    delta: Fraction
    m: int

    @classmethod
    def for_run(cls, definition: ProblemDef, n: int, r: int, mode: Mode,
                net_scale: Fraction = Fraction(1)) -> 'NetParams':
        """Net parameters of one run; Monte-Carlo uses δ = 1/(nν)."""
        eps = epsilon_for(definition.nu, n, r)
        delta = LAS_VEGAS_DELTA if mode is Mode.LAS_VEGAS else Fraction(1, n * definition.nu)
        m = net_size(eps, definition.lam, delta)
        if net_scale != 1:
            m = max(1, math.ceil(m * Fraction(net_scale)))
        return cls(eps, definition.lam, delta, m)


@dataclass
class WeightState:
    """Integer exponents a_i; the weight of element i is (n^(1/r))^(a_i)."""
    exponents: List[int]
    r: int
    n: int

    def __post_init__(self):
        if any(a < 0 for a in self.exponents):
            raise ValueError("exponents must be nonnegative")
        self._base = WeightBase(self.n, self.r)

    @classmethod
    def uniform(cls, n: int, r: int) -> 'WeightState':
        return cls([0] * n, r, n)

    @property
    def base(self) -> WeightBase:
        return self._base

    def log_weights(self) -> np.ndarray:
        """a_i·ln(n)/r as doubles, the sampling keys' weight term."""
        return np.asarray(self.exponents, dtype=float) * self._base.log_base

    def histogram(self, indices: Optional[Sequence[int]] = None) -> ExponentHistogram:
        if indices is None:
            return ExponentHistogram.from_exponents(self.exponents)
        return ExponentHistogram.from_exponents(self.exponents[i] for i in indices)

    def bump(self, indices: Sequence[int]):
        for i in indices:
            self.exponents[i] += 1


class NetRaces:
    """m parallel single-item weighted reservoirs.

    Element i with log-weight lw enters race j with key ln(E_ij) − lw, where
    E_ij = −ln(1 − u_ij) is a unit exponential; the smallest key wins, so race j
    picks i with probability w_i / Σw. Offers must come in element order and
    each offer draws m uniforms, so a streamed pass and an in-memory loop
    consume the RNG identically.
    """

    def __init__(self, m: int, rng: np.random.Generator):
        self.m = m
        self.rng = rng
        self.best_keys = np.full(m, np.inf)
        self.best_index = np.full(m, -1, dtype=np.int64)

    def offer(self, index: int, log_weight: float):
        u = self.rng.random(self.m)
        keys = np.log(-np.log1p(-u)) - log_weight
        better = keys < self.best_keys
        if better.any():
            self.best_keys[better] = keys[better]
            self.best_index[better] = index

    def winners(self) -> List[int]:
        return [int(i) for i in self.best_index]

    def occupied(self) -> int:
        return int(np.count_nonzero(self.best_index >= 0))


def sample_net(weights: WeightState, m: int, rng: np.random.Generator) -> List[int]:
    """m i.i.d. indices with Pr[i] = w_i / w(S)."""
    if not weights.exponents:
        raise ValueError("cannot sample from an empty weight vector")
    races = NetRaces(m, rng)
    for i, lw in enumerate(weights.log_weights()):
        races.offer(i, float(lw))
    return races.winners()


def exponent_of(e: Element, bases: Sequence[Basis], definition: ProblemDef) -> int:
    """Number of stored bases whose optimum e violates."""
    return sum(1 for b in bases if violates(b.value, e, definition))


def weight_of(index: int, bases: Sequence[Basis], definition: ProblemDef,
              elements: Sequence[Element]) -> int:
    return exponent_of(elements[index], bases, definition)


@dataclass
class IterationRecord:
    iteration: int
    net_indices: List[int]
    basis: Basis
    violator_weight: Union[int, Decimal]
    total_weight: Union[int, Decimal]
    violators: int
    success: bool
    sandwich_ok: Optional[bool] = None


@dataclass
class MetaTrace:
    """Per-iteration records plus run-level parameters."""
    n: int
    r: int
    mode: Mode
    params: NetParams
    nu: int
    records: List[IterationRecord] = field(default_factory=list)
    sandwich_violations: int = 0
    exponents_consistent: Optional[bool] = None
    failed: bool = False

    @property
    def iterations(self) -> int:
        return len(self.records)

    @property
    def successes(self) -> int:
        return sum(1 for rec in self.records if rec.success)

    @property
    def updates(self) -> int:
        """Weight updates, i.e. successful iterations that still had violators."""
        return sum(1 for rec in self.records if rec.success and rec.violators)

    @property
    def iteration_budget(self) -> int:
        return 3 * self.nu * self.r

    def bases(self) -> List[Basis]:
        return [rec.basis for rec in self.records]


class IterationLoop:
    """State machine shared by every execution model.

    A model supplies the net and the violation scan; the loop owns the
    success predicate, the weight bookkeeping checks and termination.
    """

    def __init__(self, definition: ProblemDef, n: int, r: int, mode: Mode,
                 streams: RngStreams, net_scale: Fraction = Fraction(1),
                 max_iterations: Optional[int] = None,
                 always_include: Sequence[int] = ()):
        self.definition = definition
        self.n = n
        self.r = r
        self.mode = mode
        self.streams = streams
        self.params = NetParams.for_run(definition, n, r, mode, net_scale)
        self.base = WeightBase(n, r)
        self.max_iterations = max_iterations
        self.always_include = list(always_include)
        self.trace = MetaTrace(n, r, mode, self.params, definition.nu)
        self.stored_bases: List[Basis] = []
        logger.debug("n=%d r=%d m=%d epsilon=%s", n, r, self.params.m, self.params.epsilon)

    @property
    def iteration(self) -> int:
        return len(self.trace.records)

    def sample_rng(self) -> np.random.Generator:
        return self.streams.generator("sample", self.iteration)

    def solve_net(self, net: Sequence[int], elements: Sequence[Element]) -> Basis:
        """Deduplicate the net (plus always-included indices) and solve it."""
        chosen = sorted(set(net) | set(self.always_include))
        value, basis = solve_small([elements[i] for i in chosen], self.definition,
                                   self.streams.generator("solve", self.iteration))
        return Basis(basis.elements, value, tuple(chosen[j] for j in basis.indices))

    def record(self, net: Sequence[int], basis: Basis, hist_v: ExponentHistogram,
               hist_s: ExponentHistogram, violators: int) -> bool:
        """Store the iteration's outcome; returns True when the run is done.

        The run is done when the received violator weight is empty; the
        violator count is only reported.

        Raises:
            MonteCarloFail: Monte-Carlo mode and the iteration was unsuccessful.
            RuntimeError: max_iterations reached without termination.
        """
        success = self.base.is_light(hist_v, hist_s, self.definition.nu)
        rec = IterationRecord(self.iteration, list(net), basis, self.base.evaluate(hist_v),
                              self.base.evaluate(hist_s), violators, success)
        self.trace.records.append(rec)
        logger.debug("iteration %d: %d violators, success=%s", rec.iteration, violators, success)
        if hist_v.is_empty():
            return True
        if success:
            self.stored_bases.append(basis)
            updated = hist_s.minus(hist_v).merge(hist_v.bumped())
            lower_ok, upper_ok = self.base.sandwich(updated, len(self.stored_bases),
                                                    self.definition.nu)
            rec.sandwich_ok = lower_ok and upper_ok
            if not rec.sandwich_ok:
                self.trace.sandwich_violations += 1
                logger.warning("weight sandwich violated after %d successes", len(self.stored_bases))
        elif self.mode is Mode.MONTE_CARLO:
            self.trace.failed = True
            raise MonteCarloFail(f"iteration {rec.iteration} was unsuccessful", self.trace)
        if self.max_iterations is not None and self.iteration >= self.max_iterations:
            raise RuntimeError(f"no termination within {self.max_iterations} iterations")
        return False

    def check_exponents(self, exponents: Sequence[int], elements: Sequence[Element]) -> bool:
        """Compare maintained exponents with recomputation from stored bases."""
        ok = all(exponents[i] == weight_of(i, self.stored_bases, self.definition, elements)
                 for i in range(len(elements)))
        self.trace.exponents_consistent = ok
        if not ok:
            logger.warning("maintained exponents differ from stored-basis recomputation")
        return ok


def always_included(inst: ProblemInstance) -> List[int]:
    """Indices of the LP box sides, added to every net."""
    box = set(inst.definition.box_elements())
    return [i for i, e in enumerate(inst.elements) if e in box]


def run_meta(inst: ProblemInstance, r: int, mode: Mode = Mode.LAS_VEGAS,
             rng: Union[RngStreams, int] = 0, net_scale: Fraction = Fraction(1),
             max_iterations: Optional[int] = None
             ) -> Tuple[SolutionValue, Basis, MetaTrace]:
    """Run the meta-algorithm in memory.

    Args:
        inst: LP (with box), SVM or MEB instance.
        r: Trade-off parameter; the weight base is n^(1/r).
        mode: Las-Vegas loops until no violator is left; Monte-Carlo fails
            on the first unsuccessful iteration.
        rng: Seed or named stream factory.
        net_scale: Multiplier on the net size m.
        max_iterations: Optional bound on the number of iterations.

    Returns:
        tuple: (f(S), basis, trace)
    """
    streams = rng if isinstance(rng, RngStreams) else RngStreams(int(rng))
    elements = inst.elements
    n = len(elements)
    loop = IterationLoop(inst.definition, n, r, mode, streams, net_scale, max_iterations,
                         always_included(inst))
    weights = WeightState.uniform(n, r)
    while True:
        net = sample_net(weights, loop.params.m, loop.sample_rng())
        basis = loop.solve_net(net, elements)
        violators, hist_v, hist_s = violation_scan(basis.value, elements, weights.exponents)
        if loop.record(net, basis, hist_v, hist_s, len(violators)):
            break
        if loop.trace.records[-1].success:
            weights.bump(violators)
    loop.check_exponents(weights.exponents, elements)
    logger.debug("meta run finished after %d iterations (%d successful)",
                loop.trace.iterations, loop.trace.updates)
    return basis.value, basis, loop.trace
