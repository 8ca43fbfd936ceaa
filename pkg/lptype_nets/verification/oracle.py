#!/usr/bin/env python3
"""
Brute-force ground truth.

Every oracle enumerates candidate supports, solves their equality systems
with its own exact Gaussian elimination and filters feasibility against the
whole input. Nothing here calls into ``lptype_nets.solvers``' algorithms;
only the value and element types are shared.
"""

import logging
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import List, Optional, Sequence, Tuple

from ..solvers.lptype import LpValue, MebValue, SvmValue
from ..solvers.problems import LpInstance, MebInstance, ProblemInstance, SvmInstance
from ..utils.errors import Infeasible, NoCrossing

logger = logging.getLogger(__name__)

# C(n, k) candidate supports above which callers are told to skip the oracle
DEFAULT_CANDIDATE_LIMIT = 200_000


def _eliminate(rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]
               ) -> Optional[List[Fraction]]:
    """Unique solution of a square system, or None when it is singular."""
    size = len(rows)
    m = [[Fraction(v) for v in row] + [Fraction(b)] for row, b in zip(rows, rhs)]
    for col in range(size):
        pivot = next((i for i in range(col, size) if m[i][col] != 0), None)
        if pivot is None:
            return None
        m[col], m[pivot] = m[pivot], m[col]
        lead = m[col][col]
        m[col] = [v / lead for v in m[col]]
        for i in range(size):
            if i != col and m[i][col] != 0:
                factor = m[i][col]
                m[i] = [v - factor * w for v, w in zip(m[i], m[col])]
    return [m[i][size] for i in range(size)]


def _inner(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    return sum((Fraction(a) * b for a, b in zip(u, v)), Fraction(0))


def _dist_sq(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    diff = [Fraction(a) - b for a, b in zip(u, v)]
    return _inner(diff, diff)


def candidate_count(n: int, k: int) -> int:
    """Supports the oracles enumerate for n elements and supports up to size k."""
    return sum(comb(n, j) for j in range(1, k + 1))


def within_limit(inst: ProblemInstance, limit: int = DEFAULT_CANDIDATE_LIMIT) -> bool:
    n = len(inst.elements)
    k = inst.d if isinstance(inst, (LpInstance, SvmInstance)) else inst.d + 1
    if isinstance(inst, LpInstance):
        return comb(n, k) <= limit
    return candidate_count(n, k) <= limit


def brute_lp(inst: LpInstance) -> LpValue:
    """Lexicographically smallest optimal vertex by enumerating d-subsets.

    The box keeps the feasible region bounded, so an optimum, and its lexmin
    point, is always a vertex.

    Raises:
        Infeasible: No vertex satisfies every constraint.
    """
    d = inst.d
    c = inst.c
    constraints = list(dict.fromkeys(inst.constraints))
    best: Optional[Tuple[Fraction, ...]] = None
    for subset in combinations(constraints, d):
        x = _eliminate([h.a for h in subset], [h.b for h in subset])
        if x is None:
            continue
        if any(_inner(h.a, x) > h.b for h in constraints):
            continue
        key = (_inner(c, x),) + tuple(x)
        if best is None or key < best:
            best = key
    if best is None:
        raise Infeasible("no feasible vertex")
    return LpValue(best[0], best[1:])


def _circumball(points: Sequence[Sequence[Fraction]]
                ) -> Optional[Tuple[Fraction, Tuple[Fraction, ...]]]:
    p0 = points[0]
    diffs = [[Fraction(a) - b for a, b in zip(p, p0)] for p in points[1:]]
    if diffs:
        gram = [[2 * _inner(u, v) for v in diffs] for u in diffs]
        lam = _eliminate(gram, [_inner(u, u) for u in diffs])
        if lam is None:
            return None
    else:
        lam = []
    center = tuple(Fraction(p0[i]) + sum((l * u[i] for l, u in zip(lam, diffs)), Fraction(0))
                   for i in range(len(p0)))
    offset = [a - b for a, b in zip(center, p0)]
    return _inner(offset, offset), center


def brute_meb(inst: MebInstance) -> MebValue:
    """Smallest circumball over affinely independent supports of size <= d+1."""
    points = list(dict.fromkeys(p.p for p in inst.points))
    best: Optional[Tuple[Fraction, Tuple[Fraction, ...]]] = None
    for size in range(1, min(len(points), inst.d + 1) + 1):
        for subset in combinations(points, size):
            ball = _circumball(subset)
            if ball is None:
                continue
            radius_sq, center = ball
            if best is not None and radius_sq >= best[0]:
                continue
            if all(_dist_sq(center, p) <= radius_sq for p in points):
                best = (radius_sq, center)
    return MebValue(best[0], best[1])


def brute_svm(inst: SvmInstance) -> SvmValue:
    """Minimum-norm u over linearly independent active sets of size <= d.

    For an active set T the candidate is the least-norm solution of
    ⟨u, x_j⟩ = y_j on T, which lies in the span of T.

    Raises:
        Infeasible: No candidate separates every sample.
    """
    samples = list(dict.fromkeys((s.x, s.y) for s in inst.samples))
    best: Optional[Tuple[Fraction, Tuple[Fraction, ...]]] = None
    for size in range(1, min(len(samples), inst.d) + 1):
        for subset in combinations(samples, size):
            xs = [x for x, _ in subset]
            beta = _eliminate([[_inner(u, v) for v in xs] for u in xs], [y for _, y in subset])
            if beta is None:
                continue
            u = tuple(sum((b * x[i] for b, x in zip(beta, xs)), Fraction(0))
                      for i in range(inst.d))
            norm = _inner(u, u)
            if best is not None and norm >= best[0]:
                continue
            if all(y * _inner(u, x) >= 1 for x, y in samples):
                best = (norm, u)
    if best is None:
        raise Infeasible("samples are not separable through the origin")
    return SvmValue(best[0], best[1])


def brute_solve(inst: ProblemInstance):
    """Dispatch to the oracle of the instance's kind."""
    if isinstance(inst, LpInstance):
        return brute_lp(inst)
    if isinstance(inst, SvmInstance):
        return brute_svm(inst)
    return brute_meb(inst)


def brute_tci(A: Sequence[Fraction], B: Sequence[Fraction]) -> int:
    """Last 1-based position i with a_i <= b_i, by linear scan.

    Raises:
        NoCrossing: a_1 > b_1.
    """
    if len(A) != len(B) or not A:
        raise ValueError("A and B must be nonempty and of equal length")
    if Fraction(A[0]) > Fraction(B[0]):
        raise NoCrossing(f"a_1 = {A[0]} exceeds b_1 = {B[0]}")
    answer = 1
    for i, (a, b) in enumerate(zip(A, B), start=1):
        if Fraction(a) <= Fraction(b):
            answer = i
    return answer
