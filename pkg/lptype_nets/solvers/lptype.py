#!/usr/bin/env python3
"""
LP-type problem abstraction.

Elements (constraints or points), totally ordered solution values, bases and
the problem definition shared by linear programming, hard-margin SVM and
minimum enclosing ball. All coordinates are exact Fractions.
"""

from dataclasses import dataclass, field
from enum import Enum, IntEnum
from fractions import Fraction
from typing import Optional, Sequence, Tuple, Union

from ..utils.errors import KindMismatch
from ..utils.exact_linalg import Vector, as_vector, dot, norm_sq, sub

DEFAULT_BOX = Fraction(2 ** 20)


class Kind(Enum):
    """Problem kinds."""
    LP = "lp"
    SVM = "svm"
    MEB = "meb"


class Ordering(IntEnum):
    LT = -1
    EQ = 0
    GT = 1


def _freeze(obj, name: str, values):
    object.__setattr__(obj, name, as_vector(values))


@dataclass(frozen=True)
class Halfspace:
    """Constraint a·x <= b."""
    a: Vector
    b: Fraction

    def __post_init__(self):
        _freeze(self, 'a', self.a)
        object.__setattr__(self, 'b', Fraction(self.b))
        if not any(self.a) and self.b < 0:
            raise ValueError("zero normal with negative right-hand side is unsatisfiable")

    @property
    def dimension(self) -> int:
        return len(self.a)


@dataclass(frozen=True)
class LabeledPoint:
    """Sample x with label y in {-1, +1}."""
    x: Vector
    y: int

    def __post_init__(self):
        _freeze(self, 'x', self.x)
        if self.y not in (-1, 1):
            raise ValueError(f"label must be -1 or +1, got {self.y}")
        object.__setattr__(self, 'y', int(self.y))

    @property
    def dimension(self) -> int:
        return len(self.x)


@dataclass(frozen=True)
class Point:
    p: Vector

    def __post_init__(self):
        _freeze(self, 'p', self.p)

    @property
    def dimension(self) -> int:
        return len(self.p)


Element = Union[Halfspace, LabeledPoint, Point]


@dataclass(frozen=True)
class LpValue:
    objective: Fraction
    point: Vector

    def __post_init__(self):
        object.__setattr__(self, 'objective', Fraction(self.objective))
        _freeze(self, 'point', self.point)

    def __str__(self) -> str:
        return f"objective {self.objective}, point ({', '.join(str(v) for v in self.point)})"


@dataclass(frozen=True)
class SvmValue:
    norm_sq: Fraction
    u: Vector

    def __post_init__(self):
        object.__setattr__(self, 'norm_sq', Fraction(self.norm_sq))
        _freeze(self, 'u', self.u)

    def __str__(self) -> str:
        return f"normSq {self.norm_sq}, u ({', '.join(str(v) for v in self.u)})"


@dataclass(frozen=True)
class MebValue:
    radius_sq: Fraction
    center: Vector

    def __post_init__(self):
        object.__setattr__(self, 'radius_sq', Fraction(self.radius_sq))
        _freeze(self, 'center', self.center)

    def __str__(self) -> str:
        return f"radiusSq {self.radius_sq}, center ({', '.join(str(v) for v in self.center)})"


SolutionValue = Union[LpValue, SvmValue, MebValue]

_ELEMENT_KIND = {Halfspace: Kind.LP, LabeledPoint: Kind.SVM, Point: Kind.MEB}
_VALUE_KIND = {LpValue: Kind.LP, SvmValue: Kind.SVM, MebValue: Kind.MEB}


def element_kind(e: Element) -> Kind:
    try:
        return _ELEMENT_KIND[type(e)]
    except KeyError:
        raise KindMismatch(f"not an element: {e!r}")


def value_kind(v: SolutionValue) -> Kind:
    try:
        return _VALUE_KIND[type(v)]
    except KeyError:
        raise KindMismatch(f"not a solution value: {v!r}")


@dataclass(frozen=True)
class Basis:
    """Minimal subset with the same optimum; indices refer to the instance."""
    elements: Tuple[Element, ...]
    value: SolutionValue
    indices: Tuple[int, ...] = field(default=())

    def __len__(self) -> int:
        return len(self.elements)


@dataclass(frozen=True)
class ProblemDef:
    """Kind, dimension and objective of an LP-type problem.

    ν (combinatorial dimension) and λ (VC dimension) are d+1 for all kinds.
    """
    kind: Kind
    d: int
    c: Optional[Vector] = None
    box: Optional[Fraction] = None

    def __post_init__(self):
        if self.c is not None:
            _freeze(self, 'c', self.c)
            if len(self.c) != self.d:
                raise ValueError(f"objective has length {len(self.c)}, expected {self.d}")
        if self.box is not None:
            object.__setattr__(self, 'box', Fraction(self.box))

    @property
    def nu(self) -> int:
        return self.d + 1

    @property
    def lam(self) -> int:
        return self.d + 1

    @property
    def objective(self) -> Vector:
        return self.c if self.c is not None else tuple(Fraction(0) for _ in range(self.d))

    def box_elements(self) -> Tuple[Halfspace, ...]:
        """The 2d halfspaces ±x_i <= M, empty when no box is set."""
        if self.kind is not Kind.LP or self.box is None:
            return ()
        out = []
        for i in range(self.d):
            unit = [0] * self.d
            unit[i] = 1
            out.append(Halfspace(tuple(unit), self.box))
            unit[i] = -1
            out.append(Halfspace(tuple(unit), self.box))
        return tuple(out)


def _check_same(v1: SolutionValue, v2: SolutionValue):
    k1, k2 = value_kind(v1), value_kind(v2)
    if k1 is not k2:
        raise KindMismatch(f"cannot compare {k1.value} with {k2.value}")


def _cmp(a, b) -> Ordering:
    if a < b:
        return Ordering.LT
    if a > b:
        return Ordering.GT
    return Ordering.EQ


def order_compare(v1: SolutionValue, v2: SolutionValue) -> Ordering:
    """Total order of solution values.

    LP compares the objective and breaks ties lexicographically on the point;
    SVM and MEB compare the squared norm and squared radius.
    """
    _check_same(v1, v2)
    if isinstance(v1, LpValue):
        if len(v1.point) != len(v2.point):
            raise KindMismatch("LP values of different dimension")
        return _cmp((v1.objective,) + v1.point, (v2.objective,) + v2.point)
    if isinstance(v1, SvmValue):
        return _cmp(v1.norm_sq, v2.norm_sq)
    return _cmp(v1.radius_sq, v2.radius_sq)


def slack(value: SolutionValue, e: Element) -> Fraction:
    """Signed constraint slack of e at the witness; negative means violated."""
    kind = value_kind(value)
    if element_kind(e) is not kind:
        raise KindMismatch(f"{type(e).__name__} is not an element of a {kind.value} problem")
    if isinstance(value, LpValue):
        return e.b - dot(e.a, value.point)
    if isinstance(value, SvmValue):
        return e.y * dot(value.u, e.x) - 1
    return value.radius_sq - norm_sq(sub(value.center, e.p))


def violates(value: Optional[SolutionValue], e: Element,
             definition: Optional[ProblemDef] = None) -> bool:
    """True iff the witness of value fails e's constraint.

    ``None`` stands for the value of the empty set, which every element
    violates.
    """
    if value is None:
        return True
    if definition is not None and element_kind(e) is not definition.kind:
        raise KindMismatch(f"{type(e).__name__} is not an element of a {definition.kind.value} problem")
    return slack(value, e) < 0


def is_tight(value: SolutionValue, e: Element) -> bool:
    return slack(value, e) == 0


def validate_elements(elements: Sequence[Element], definition: ProblemDef):
    """Raise when an element has the wrong kind or dimension."""
    for e in elements:
        if element_kind(e) is not definition.kind:
            raise KindMismatch(f"{type(e).__name__} in a {definition.kind.value} problem")
        if e.dimension != definition.d:
            raise ValueError(f"element of dimension {e.dimension} in a d={definition.d} problem")
