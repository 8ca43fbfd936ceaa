#!/usr/bin/env python3
"""
Random well-posed LP, SVM and MEB instances with planted ground truth.
"""

import logging
from fractions import Fraction
from typing import List, Optional

import numpy as np

from ..solvers.lptype import DEFAULT_BOX, Halfspace, LabeledPoint, Point
from ..solvers.problems import LpInstance, MebInstance, SvmInstance
from ..utils.exact_linalg import dot
from ..utils.rng_streams import RngStreams

logger = logging.getLogger(__name__)

COORD_RANGE = 100


def _check(n: int, d: int):
    if d < 1:
        raise ValueError(f"dimension must be positive, got d={d}")
    if n < d + 1:
        raise ValueError(f"need n >= d+1 elements, got n={n}, d={d}")


def _nonzero(g: np.random.Generator, d: int, bound: int) -> List[int]:
    while True:
        v = [int(x) for x in g.integers(-bound, bound + 1, size=d)]
        if any(v):
            return v


def gen_random_lp(n: int, d: int, seed: int = 0, box: Optional[Fraction] = DEFAULT_BOX,
                  coord_range: int = COORD_RANGE) -> LpInstance:
    """n integer halfspaces passing near a planted feasible point, plus the box.

    Each constraint a·x <= a·x0 + s has a random normal a and slack s in
    [0, coord_range], so the planted point x0 satisfies all of them.
    """
    _check(n, d)
    g = RngStreams(seed).generator("lp", n, d)
    x0 = [int(v) for v in g.integers(-coord_range // 2, coord_range // 2 + 1, size=d)]
    c = _nonzero(g, d, coord_range)
    core = []
    for _ in range(n):
        a = _nonzero(g, d, coord_range)
        core.append(Halfspace(a, dot(a, x0) + int(g.integers(0, coord_range + 1))))
    meta = {'family': 'random-lp', 'seed': seed, 'planted': [Fraction(v) for v in x0]}
    logger.debug("random LP n=%d d=%d seed=%d", n, d, seed)
    return LpInstance.with_box(d, c, core, box, meta)


def gen_meb_points(n: int, d: int, seed: int = 0, coord_range: int = 1000) -> MebInstance:
    """n rational points in [−coord_range, coord_range]^d with denominators 1, 2 or 4."""
    _check(n, d)
    g = RngStreams(seed).generator("meb", n, d)
    points = []
    for _ in range(n):
        den = int(g.choice([1, 2, 4]))
        coords = g.integers(-coord_range * den, coord_range * den + 1, size=d)
        points.append(Point([Fraction(int(v), den) for v in coords]))
    return MebInstance(d, points, {'family': 'meb', 'seed': seed})


def gen_svm_separable(n: int, d: int, seed: int = 0, margin=1,
                      coord_range: int = COORD_RANGE) -> SvmInstance:
    """Samples separated through the origin by a planted u0.

    Every sample satisfies y·⟨u0, x⟩ >= margin, so u0/margin is feasible.
    """
    _check(n, d)
    margin = Fraction(margin)
    if margin <= 0:
        raise ValueError(f"margin must be positive, got {margin}")
    g = RngStreams(seed).generator("svm", n, d)
    u0 = _nonzero(g, d, 10)
    samples = []
    while len(samples) < n:
        x = [int(v) for v in g.integers(-coord_range, coord_range + 1, size=d)]
        s = dot(u0, x)
        if abs(s) < margin:
            continue
        samples.append(LabeledPoint(x, 1 if s > 0 else -1))
    meta = {'family': 'svm', 'seed': seed, 'planted': [Fraction(v) for v in u0],
            'margin': margin}
    return SvmInstance(d, samples, meta)


def gen_digit_lp(digit: int, seed: int = 0, extra: int = 4, box: Optional[Fraction] = DEFAULT_BOX,
                 coord_range: int = COORD_RANGE) -> LpInstance:
    """Planar LP minimising y whose optimum is exactly (x0, digit).

    The core is y >= digit + |x − x0| plus ``extra`` random constraints
    y >= digit + s·(x − x0) with |s| <= 1, which the core already implies.
    """
    g = RngStreams(seed).generator("digit", digit)
    x0 = int(g.integers(-coord_range, coord_range + 1))
    slopes = [Fraction(1), Fraction(-1)] + [Fraction(int(k), 4) for k in g.integers(-4, 5, size=extra)]
    core = [Halfspace((s, -1), s * x0 - digit) for s in slopes]
    meta = {'family': 'digit-lp', 'seed': seed, 'expected_objective': Fraction(digit),
            'planted': [Fraction(x0), Fraction(digit)]}
    return LpInstance.with_box(2, (0, 1), core, box, meta)
