#!/usr/bin/env python3
"""
Reductions from communication problems to linear programs.

- TCI to a 2-dimensional LP: the region above both curves' extended segments.
- Set disjointness to a d-dimensional LP split over k sites.
- A direct sum of 2-dimensional LPs into one LP whose optimum carries the
  sub-optima as base-M digits.
"""

import math
from fractions import Fraction
from typing import Callable, List, Sequence, Tuple

from ..solvers.lptype import DEFAULT_BOX, Halfspace, LpValue
from ..solvers.problems import LpInstance
from ..solvers.small_solver import solve_small
from ..utils.errors import RangeError
from .tci import TciInstance


def _power_of_two_at_least(v: Fraction) -> Fraction:
    k = max(1, math.ceil(v))
    return Fraction(1 << (k - 1).bit_length())


def tci_box(t: TciInstance) -> Fraction:
    """A box large enough to hold the crossing of both curves' extensions."""
    biggest = max(abs(v) for v in t.A + t.B)
    return max(DEFAULT_BOX, _power_of_two_at_least(2 * (biggest + t.n + 2)))


def tci_answer_from_lp(value: LpValue) -> int:
    """floor of the optimum's x coordinate."""
    return math.floor(value.point[0])


def tci_to_lp(t: TciInstance) -> Tuple[LpInstance, Callable[[LpValue], int]]:
    """2(n−1) halfspaces y >= line through consecutive points, minimise y.

    Returns:
        tuple: (LP instance with box, rule mapping its optimum to the answer)
    """
    core = []
    for seq in (t.A, t.B):
        for i in range(1, t.n):
            v, w = seq[i - 1], seq[i]
            s = w - v
            core.append(Halfspace((s, -1), s * i - v))
    meta = {'family': 'tci', 'answer': t.answer}
    return LpInstance.with_box(2, (0, 1), core, tci_box(t), meta), tci_answer_from_lp


def disj_to_lp(X: Sequence[Sequence[int]], box: Fraction = DEFAULT_BOX) -> LpInstance:
    """Site i contributes x_j <= X^i_j for every j; objective minimises −Σ x_j.

    The optimum is −Σ_j min_i X^i_j. ``meta['sites']`` gives each constraint's
    site, with the box sides on site 0.
    """
    if not X:
        raise ValueError("need at least one site")
    d = len(X[0])
    if d < 1 or any(len(row) != d for row in X):
        raise ValueError("all sites need vectors of the same positive length")
    core, sites = [], []
    for i, row in enumerate(X):
        for j, bit in enumerate(row):
            if bit not in (0, 1):
                raise ValueError(f"site {i} has a non-binary entry {bit}")
            unit = [0] * d
            unit[j] = 1
            core.append(Halfspace(unit, bit))
            sites.append(i)
    sites += [0] * (2 * d)
    expected = -sum(min(row[j] for row in X) for j in range(d))
    meta = {'family': 'disjointness', 'k': len(X), 'sites': sites,
            'expected_objective': Fraction(expected)}
    return LpInstance.with_box(d, [-1] * d, core, box, meta)


def disjointness_answer(value: LpValue) -> int:
    """1 when the sets intersect, i.e. the optimum is at most −1."""
    return 1 if value.objective <= -1 else 0


def combine_2d(instances: Sequence[LpInstance], M: int) -> LpInstance:
    """Stack m planar LPs into one LP over 2m variables.

    Block i uses variables (x_{2i}, x_{2i+1}) and the objective weight M^i, so
    the combined optimum is Σ M^i·f_i.

    Raises:
        RangeError: A sub-optimum is not an integer in [0, M).
    """
    if not instances:
        raise ValueError("need at least one instance")
    if M < 2:
        raise RangeError(f"base M must be at least 2, got {M}")
    dim = 2 * len(instances)
    box = max(inst.box for inst in instances)
    c: List[Fraction] = [Fraction(0)] * dim
    core: List[Halfspace] = []
    expected = Fraction(0)
    for i, inst in enumerate(instances):
        if inst.d != 2:
            raise ValueError(f"instance {i} has dimension {inst.d}, expected 2")
        value, _ = solve_small(inst.elements, inst.definition)
        f = value.objective
        if f.denominator != 1 or not 0 <= f < M:
            raise RangeError(f"sub-optimum {f} of instance {i} is not an integer in [0, {M})")
        weight = Fraction(M) ** i
        expected += weight * f
        c[2 * i] = inst.c[0] * weight
        c[2 * i + 1] = inst.c[1] * weight
        lifted = inst.constraints if inst.box != box else inst.core_constraints()
        for h in lifted:
            a = [Fraction(0)] * dim
            a[2 * i], a[2 * i + 1] = h.a
            core.append(Halfspace(a, h.b))
    meta = {'family': 'direct-sum', 'M': M, 'blocks': len(instances),
            'expected_objective': expected}
    return LpInstance.with_box(dim, c, core, box, meta)


def decode_digits(objective: Fraction, M: int, count: int) -> List[int]:
    """Base-M digits of the combined optimum, least significant first."""
    if Fraction(objective).denominator != 1 or objective < 0:
        raise RangeError(f"combined optimum {objective} is not a nonnegative integer")
    v = int(objective)
    digits = []
    for _ in range(count):
        v, digit = divmod(v, M)
        digits.append(digit)
    return digits
