#!/usr/bin/env python3
"""
Generic exact solver for small LP-type instances.

A randomized incremental recursion: elements are processed in random order,
and whenever the current optimum violates an element the prefix is re-solved
with that element pinned to its boundary. At most ν elements are ever pinned,
so the recursion depth stays at ν+1. The base case solves the pinned
equality system exactly (with the bounding box for LP).
"""

import itertools
import logging
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..utils.errors import Infeasible, LpTypeError, Unbounded
from ..utils.exact_linalg import dot, gram_min_norm, norm_sq, row_reduce, solve_unique, sub
from .lptype import (Basis, Element, Halfspace, Kind, LabeledPoint, LpValue, MebValue,
                     Ordering, ProblemDef, SolutionValue, SvmValue, is_tight, order_compare,
                     validate_elements, violates)

logger = logging.getLogger(__name__)

_INFEASIBLE = object()


class _PinnedInfeasible(Exception):
    """The pinned equality system has no solution."""


def _box_side(h: Halfspace, box: Optional[Fraction]) -> Optional[Tuple[int, int]]:
    """(coordinate, sign) when h is the box side sign·x_i <= box."""
    if box is None or h.b != box:
        return None
    nonzero = [(i, v) for i, v in enumerate(h.a) if v != 0]
    if len(nonzero) != 1 or nonzero[0][1] not in (1, -1):
        return None
    return nonzero[0][0], int(nonzero[0][1])


class _LpBase:
    """Lexicographic LP minimum over pinned equalities and per-side box bounds."""

    def __init__(self, definition: ProblemDef, bounds: Dict[Tuple[int, int], Fraction]):
        self.d = definition.d
        self.c = definition.objective
        self.bounds = bounds

    def key(self, x):
        return (dot(self.c, x),) + tuple(x)

    def in_box(self, x) -> bool:
        return all(sign * x[i] <= bound for (i, sign), bound in self.bounds.items())

    def __call__(self, pinned: Sequence[Halfspace]):
        rows = [h.a for h in pinned]
        rhs = [h.b for h in pinned]
        if rows:
            _, pivots, consistent = row_reduce(rows, rhs)
            if not consistent:
                return _INFEASIBLE
            free = self.d - len(pivots)
        else:
            free = self.d
        best = None
        best_key = None
        for coords in itertools.combinations(range(self.d), free):
            for signs in itertools.product((1, -1), repeat=free):
                extra_rows = []
                extra_rhs = []
                for i, sign in zip(coords, signs):
                    unit = [Fraction(0)] * self.d
                    unit[i] = Fraction(sign)
                    extra_rows.append(unit)
                    extra_rhs.append(self.bounds[(i, sign)])
                x = solve_unique(rows + extra_rows, rhs + extra_rhs)
                if x is None or not self.in_box(x):
                    continue
                k = self.key(x)
                if best_key is None or k < best_key:
                    best, best_key = x, k
        if best is None:
            return _INFEASIBLE
        return LpValue(best_key[0], best)


def _svm_base(d: int):
    def base(pinned: Sequence[LabeledPoint]):
        u = gram_min_norm([p.x for p in pinned], [Fraction(p.y) for p in pinned], d)
        if u is None:
            return _INFEASIBLE
        return SvmValue(norm_sq(u), u)
    return base


def _meb_base(pinned: Sequence) -> Optional[MebValue]:
    if not pinned:
        return None
    p0 = pinned[0].p
    qs = [sub(q.p, p0) for q in pinned[1:]]
    w = gram_min_norm(qs, [norm_sq(q) / 2 for q in qs], len(p0))
    if w is None:
        raise LpTypeError("pinned points are not cospherical")
    return MebValue(norm_sq(w), tuple(a + b for a, b in zip(p0, w)))


def _incremental(elements: Sequence[Element], pinned: Tuple[Element, ...], base,
                 max_pinned: int):
    value = base(pinned)
    if value is _INFEASIBLE:
        raise _PinnedInfeasible()
    for i, e in enumerate(elements):
        if violates(value, e):
            if len(pinned) >= max_pinned:
                raise _PinnedInfeasible()
            value = _incremental(elements[:i], pinned + (e,), base, max_pinned)
    return value


def _dedupe(elements: Sequence[Element]) -> List[Tuple[int, Element]]:
    seen = set()
    out = []
    for i, e in enumerate(elements):
        if e not in seen:
            seen.add(e)
            out.append((i, e))
    return out


def _lp_bounds(elements: Sequence[Element], definition: ProblemDef, relax: bool
               ) -> Tuple[Dict[Tuple[int, int], Fraction], List[Tuple[int, Element]]]:
    """Split LP elements into box sides and regular constraints.

    Missing box sides raise Unbounded unless relax is set, in which case they
    are pushed outward to 2M (enough to detect a strictly better optimum).
    """
    bounds: Dict[Tuple[int, int], Fraction] = {}
    regular = []
    for i, e in _dedupe(elements):
        side = _box_side(e, definition.box)
        if side is not None:
            bounds[side] = definition.box
        else:
            regular.append((i, e))
    missing = [(i, s) for i in range(definition.d) for s in (1, -1) if (i, s) not in bounds]
    if missing:
        if not relax or definition.box is None:
            raise Unbounded(f"LP has no bounding box side for {len(missing)} direction(s)")
        for side in missing:
            bounds[side] = 2 * definition.box
    return bounds, regular


def _optimum(elements: Sequence[Element], definition: ProblemDef,
             rng: Optional[np.random.Generator], relax_box: bool = False
             ) -> Optional[SolutionValue]:
    if definition.kind is Kind.LP:
        bounds, items = _lp_bounds(elements, definition, relax_box)
        base = _LpBase(definition, bounds)
    elif definition.kind is Kind.SVM:
        items = _dedupe(elements)
        base = _svm_base(definition.d)
    else:
        items = _dedupe(elements)
        base = _meb_base
    order = [e for _, e in items]
    if rng is not None and len(order) > 1:
        order = [order[j] for j in rng.permutation(len(order))]
    try:
        value = _incremental(order, (), base, definition.nu)
    except _PinnedInfeasible:
        raise Infeasible(f"{definition.kind.value} instance has no feasible solution")
    if definition.kind is not Kind.MEB and any(violates(value, e) for e in order):
        raise Infeasible(f"{definition.kind.value} instance has no feasible solution")
    return value


def solve_small(elements: Sequence[Element], definition: ProblemDef,
                rng: Optional[np.random.Generator] = None) -> Tuple[SolutionValue, Basis]:
    """Exact optimum of a small element set and a minimal basis.

    Args:
        elements: Constraints or points; duplicates are ignored.
        definition: Problem kind, dimension, LP objective and box.
        rng: Order randomisation; None processes elements in input order.

    Returns:
        tuple: (value, basis) with basis indices into ``elements``.

    Raises:
        Infeasible: Empty LP region or non-separable SVM samples.
        Unbounded: LP without a complete bounding box.
    """
    validate_elements(elements, definition)
    if definition.kind is not Kind.LP and not elements:
        raise ValueError(f"{definition.kind.value} needs at least one element")
    value = _optimum(elements, definition, rng)
    return value, reduce_to_basis(elements, value, definition)


def _same(a: Optional[SolutionValue], b: SolutionValue) -> bool:
    if a is None:
        return False
    if order_compare(a, b) is not Ordering.EQ:
        return False
    return a == b


def reduce_to_basis(elements: Sequence[Element], value: SolutionValue,
                    definition: ProblemDef) -> Basis:
    """Minimal subset of elements whose optimum is value.

    Only elements tight at the witness can belong to a basis; they are then
    dropped greedily while the optimum stays the same.
    """
    candidates = [(i, e) for i, e in _dedupe(elements) if is_tight(value, e)]
    kept = list(candidates)
    for item in candidates:
        trial = [x for x in kept if x is not item]
        try:
            trial_value = _optimum([e for _, e in trial], definition, None, relax_box=True)
        except Infeasible:
            continue
        if _same(trial_value, value):
            kept = trial
    logger.debug("basis of size %d from %d tight elements", len(kept), len(candidates))
    return Basis(tuple(e for _, e in kept), value, tuple(i for i, _ in kept))
