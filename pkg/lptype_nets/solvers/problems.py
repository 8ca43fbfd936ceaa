#!/usr/bin/env python3
"""
The three LP-type instantiations: linear programming, hard-margin linear SVM
through the origin, and minimum enclosing ball.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..utils.errors import KindMismatch
from ..utils.exact_linalg import Vector, as_vector, dot
from ..utils.precision import ExponentHistogram
from .lptype import (DEFAULT_BOX, Element, Halfspace, Kind, LabeledPoint, LpValue, MebValue,
                     Point, ProblemDef, SolutionValue, SvmValue, element_kind, violates)
from .small_solver import solve_small


@dataclass
class LpInstance:
    """min c·x subject to a·x <= b for every constraint, box included."""
    d: int
    c: Vector
    constraints: List[Halfspace]
    box: Optional[Fraction] = DEFAULT_BOX
    meta: Dict[str, Any] = field(default_factory=dict)

    kind = Kind.LP

    def __post_init__(self):
        self.c = as_vector(self.c)
        if len(self.c) != self.d:
            raise ValueError(f"objective has length {len(self.c)}, expected d={self.d}")
        for h in self.constraints:
            if h.dimension != self.d:
                raise ValueError(f"constraint of dimension {h.dimension} in a d={self.d} LP")

    @classmethod
    def with_box(cls, d: int, c: Sequence, core: Sequence[Halfspace],
                 box: Optional[Fraction] = DEFAULT_BOX,
                 meta: Optional[Dict[str, Any]] = None) -> 'LpInstance':
        """Build an instance whose constraint list ends with the 2d box sides."""
        definition = ProblemDef(Kind.LP, d, c, box)
        return cls(d, c, list(core) + list(definition.box_elements()), box, dict(meta or {}))

    @property
    def definition(self) -> ProblemDef:
        return ProblemDef(Kind.LP, self.d, self.c, self.box)

    @property
    def elements(self) -> List[Halfspace]:
        return self.constraints

    def core_constraints(self) -> List[Halfspace]:
        """Constraints that are not box sides."""
        box = set(self.definition.box_elements())
        return [h for h in self.constraints if h not in box]


@dataclass
class SvmInstance:
    """min ‖u‖² subject to y·⟨u, x⟩ >= 1 (no bias term)."""
    d: int
    samples: List[LabeledPoint]
    meta: Dict[str, Any] = field(default_factory=dict)

    kind = Kind.SVM

    def __post_init__(self):
        for s in self.samples:
            if s.dimension != self.d:
                raise ValueError(f"sample of dimension {s.dimension} in a d={self.d} SVM")

    @property
    def definition(self) -> ProblemDef:
        return ProblemDef(Kind.SVM, self.d)

    @property
    def elements(self) -> List[LabeledPoint]:
        return self.samples


@dataclass
class MebInstance:
    """Smallest ball containing all points."""
    d: int
    points: List[Point]
    meta: Dict[str, Any] = field(default_factory=dict)

    kind = Kind.MEB

    def __post_init__(self):
        if not self.points:
            raise ValueError("MEB instance needs at least one point")
        for p in self.points:
            if p.dimension != self.d:
                raise ValueError(f"point of dimension {p.dimension} in a d={self.d} MEB")

    @property
    def definition(self) -> ProblemDef:
        return ProblemDef(Kind.MEB, self.d)

    @property
    def elements(self) -> List[Point]:
        return self.points


ProblemInstance = Union[LpInstance, SvmInstance, MebInstance]


def solve_instance(inst: ProblemInstance, rng: Optional[np.random.Generator] = None
                   ) -> SolutionValue:
    return solve_small(inst.elements, inst.definition, rng)[0]


def lp_solve_lexmin_sequential(inst: LpInstance) -> LpValue:
    """Lexicographic minimum by d+1 successive solves.

    First the objective is minimised, then x_1, x_2, ... each with every
    earlier optimum fixed by a pair of opposite halfspaces.
    """
    d = inst.d
    fixed: List[Halfspace] = list(inst.constraints)

    def minimise(direction: Vector) -> Fraction:
        definition = ProblemDef(Kind.LP, d, direction, inst.box)
        value, _ = solve_small(fixed, definition)
        return value.objective

    if any(inst.c):
        best = minimise(inst.c)
        fixed += [Halfspace(inst.c, best), Halfspace(tuple(-v for v in inst.c), -best)]
    point = []
    for k in range(d):
        unit = tuple(Fraction(1 if j == k else 0) for j in range(d))
        coordinate = minimise(unit)
        point.append(coordinate)
        fixed += [Halfspace(unit, coordinate), Halfspace(tuple(-v for v in unit), -coordinate)]
    return LpValue(dot(inst.c, point), point)


def svm_solve(inst: SvmInstance) -> SvmValue:
    """Minimum-norm separator through the origin; Infeasible if none exists."""
    return solve_small(inst.samples, inst.definition)[0]


def meb_solve(inst: MebInstance) -> MebValue:
    return solve_small(inst.points, inst.definition)[0]


def violation_scan(value: SolutionValue, elements: Sequence[Element],
                   exponents: Optional[Sequence[int]] = None
                   ) -> Tuple[List[int], ExponentHistogram, ExponentHistogram]:
    """One pass over the elements: violator indices, w(V) and w(S).

    Weights are returned as exponent histograms; with no exponents every
    weight is b^0 = 1.

    Returns:
        tuple: (ascending violator indices, violator histogram, total histogram)
    """
    violators: List[int] = []
    hist_v = ExponentHistogram()
    hist_s = ExponentHistogram()
    for i, e in enumerate(elements):
        a = exponents[i] if exponents is not None else 0
        hist_s.add(a)
        if violates(value, e):
            violators.append(i)
            hist_v.add(a)
    return violators, hist_v, hist_s


def _checked_scan(kind: Kind, value: SolutionValue, elements: Sequence[Element],
                  weights) -> Tuple[List[int], ExponentHistogram, ExponentHistogram]:
    for e in elements:
        if element_kind(e) is not kind:
            raise KindMismatch(f"{type(e).__name__} in a {kind.value} scan")
    exponents = getattr(weights, 'exponents', weights)
    return violation_scan(value, elements, exponents)


def lp_violation_scan(value: LpValue, constraints: Sequence[Halfspace], weights=None):
    """Constraints whose halfspace the witness point leaves, with w(V), w(S)."""
    return _checked_scan(Kind.LP, value, constraints, weights)


def svm_violation_scan(value: SvmValue, samples: Sequence[LabeledPoint], weights=None):
    return _checked_scan(Kind.SVM, value, samples, weights)


def meb_violation_scan(value: MebValue, points: Sequence[Point], weights=None):
    return _checked_scan(Kind.MEB, value, points, weights)
