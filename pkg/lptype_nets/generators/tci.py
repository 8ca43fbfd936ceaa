#!/usr/bin/env python3
"""
Two-curve intersection (TCI) instances.

Alice holds an increasing convex sequence A, Bob a decreasing convex
sequence B, both indexed by positions 1..n; the answer is the last position
with a_i <= b_i. Curves are kept as structured pieces (step curves and line
segments) so that the shear and translation operators of the recursive
construction stay exact; they are flattened into A and B at the end.

Recursive instances are built from N independent sub-instances of one round
less. Sub-instances are sheared by the largest slope of their already placed
neighbour and translated so that consecutive blocks join convexly. Even
rounds place Bob's blocks right to left and extend Alice's special block
along straight lines; odd rounds place Alice's blocks left to right and
extend Bob's.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from ..utils.errors import NoCrossing, VerticalLine
from ..utils.rng_streams import RngStreams

logger = logging.getLogger(__name__)

PointT = Tuple[Fraction, Fraction]


class Side(Enum):
    ALICE = "alice"
    BOB = "bob"


def step_curve(bits: Sequence[int], alpha) -> Tuple[Fraction, ...]:
    """z_0 = 0 and z_i = z_{i−1} + α + i + x_i for i = 1..m."""
    alpha = Fraction(alpha)
    z = [Fraction(0)]
    for i, bit in enumerate(bits, start=1):
        z.append(z[-1] + alpha + i + int(bit))
    return tuple(z)


def line_segment(p1: PointT, p2: PointT, a: int, b: int) -> Tuple[Fraction, ...]:
    """Values at positions a..b of the line through p1 and p2."""
    x1, y1 = Fraction(p1[0]), Fraction(p1[1])
    x2, y2 = Fraction(p2[0]), Fraction(p2[1])
    if x1 == x2:
        raise VerticalLine(f"points {p1} and {p2} share x = {x1}")
    if a > b:
        raise ValueError(f"empty range [{a}, {b}]")
    slope = (y2 - y1) / (x2 - x1)
    return tuple(slope * (i - x1) + y1 for i in range(a, b + 1))


def _point(p) -> PointT:
    return (Fraction(p[0]), Fraction(p[1]))


@dataclass(frozen=True)
class StepPiece:
    """StepCurve(bits, alpha) drawn from anchor at positions anchor.x .. anchor.x + len(bits)."""
    bits: Tuple[int, ...]
    alpha: Fraction
    anchor: PointT

    def __post_init__(self):
        object.__setattr__(self, 'bits', tuple(int(b) for b in self.bits))
        object.__setattr__(self, 'alpha', Fraction(self.alpha))
        object.__setattr__(self, 'anchor', _point(self.anchor))

    @property
    def start(self) -> int:
        return int(self.anchor[0])

    @property
    def stop(self) -> int:
        return self.start + len(self.bits)

    def values(self) -> Tuple[Fraction, ...]:
        return tuple(self.anchor[1] + z for z in step_curve(self.bits, self.alpha))

    def sheared(self, slope: Fraction, pivot: Fraction) -> 'StepPiece':
        x0, y0 = self.anchor
        return StepPiece(self.bits, self.alpha + slope, (x0, y0 + slope * (x0 - pivot)))

    def translated(self, dx: int, dy: Fraction) -> 'StepPiece':
        return StepPiece(self.bits, self.alpha, (self.anchor[0] + dx, self.anchor[1] + dy))


@dataclass(frozen=True)
class LinePiece:
    """LineSegment(p1, p2) over positions a..b."""
    p1: PointT
    p2: PointT
    a: int
    b: int

    def __post_init__(self):
        object.__setattr__(self, 'p1', _point(self.p1))
        object.__setattr__(self, 'p2', _point(self.p2))

    @property
    def start(self) -> int:
        return self.a

    @property
    def stop(self) -> int:
        return self.b

    def values(self) -> Tuple[Fraction, ...]:
        return line_segment(self.p1, self.p2, self.a, self.b)

    def sheared(self, slope: Fraction, pivot: Fraction) -> 'LinePiece':
        def move(p):
            return (p[0], p[1] + slope * (p[0] - pivot))
        return LinePiece(move(self.p1), move(self.p2), self.a, self.b)

    def translated(self, dx: int, dy: Fraction) -> 'LinePiece':
        def move(p):
            return (p[0] + dx, p[1] + dy)
        return LinePiece(move(self.p1), move(self.p2), self.a + dx, self.b + dx)


CurvePiece = Union[StepPiece, LinePiece]


def _flatten(pieces: Sequence[CurvePiece]) -> Tuple[Fraction, ...]:
    out: List[Fraction] = []
    expected = None
    for piece in pieces:
        if expected is not None and piece.start != expected:
            raise ValueError(f"piece starts at {piece.start}, expected {expected}")
        out.extend(piece.values())
        expected = piece.stop + 1
    return tuple(out)


@dataclass(frozen=True)
class PieceSet:
    """Both players' curves as ordered, contiguous pieces."""
    alice: Tuple[CurvePiece, ...]
    bob: Tuple[CurvePiece, ...]

    @property
    def first(self) -> int:
        return self.alice[0].start

    @property
    def last(self) -> int:
        return self.bob[-1].stop

    def flatten(self) -> Tuple[Tuple[Fraction, ...], Tuple[Fraction, ...]]:
        return _flatten(self.alice), _flatten(self.bob)

    def alice_leftmost(self) -> PointT:
        return (Fraction(self.alice[0].start), self.alice[0].values()[0])

    def alice_rightmost(self) -> PointT:
        return (Fraction(self.alice[-1].stop), self.alice[-1].values()[-1])

    def bob_leftmost(self) -> PointT:
        return (Fraction(self.bob[0].start), self.bob[0].values()[0])

    def bob_rightmost(self) -> PointT:
        return (Fraction(self.bob[-1].stop), self.bob[-1].values()[-1])


def slope_shift(pieces: PieceSet, alpha, answer: Optional[int] = None) -> PieceSet:
    """Raise Alice's slopes by α and lower Bob's by α.

    Alice shears about her leftmost position. With a known answer Bob shears
    about 2·(answer + ½) − x_L, which leaves every comparison a_i <= b_i
    unchanged; otherwise about his rightmost position.
    """
    alpha = Fraction(alpha)
    x_left = Fraction(pieces.alice[0].start)
    if answer is not None:
        bob_pivot = 2 * answer + 1 - x_left
    else:
        bob_pivot = Fraction(pieces.bob[-1].stop)
    return PieceSet(tuple(p.sheared(alpha, x_left) for p in pieces.alice),
                    tuple(p.sheared(-alpha, bob_pivot) for p in pieces.bob))


def origin_shift(pieces: PieceSet, p, side: Union[Side, str]) -> PieceSet:
    """Translate everything so Alice's leftmost (or Bob's rightmost) point lands on p."""
    side = Side(side)
    target = _point(p)
    anchor = pieces.alice_leftmost() if side is Side.ALICE else pieces.bob_rightmost()
    dx = target[0] - anchor[0]
    if dx.denominator != 1:
        raise ValueError(f"origin shift must move positions by an integer, got {dx}")
    dy = target[1] - anchor[1]
    return PieceSet(tuple(q.translated(int(dx), dy) for q in pieces.alice),
                    tuple(q.translated(int(dx), dy) for q in pieces.bob))


def crossing_index(a: Sequence[Fraction], b: Sequence[Fraction]) -> int:
    """Last 1-based position with a_i <= b_i (the sequences are assumed valid)."""
    if a[0] > b[0]:
        raise NoCrossing(f"a_1 = {a[0]} exceeds b_1 = {b[0]}")
    lo, hi = 1, len(a)
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if a[mid - 1] <= b[mid - 1]:
            lo = mid
        else:
            hi = mid - 1
    return lo


def max_abs_slope(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    """Largest |slope| of any segment on either side."""
    slopes = [abs(y - x) for seq in (a, b) for x, y in zip(seq, seq[1:])]
    return max(slopes, default=Fraction(0))


@dataclass
class TciInstance:
    A: Tuple[Fraction, ...]
    B: Tuple[Fraction, ...]
    answer: int
    meta: Dict[str, Any] = field(default_factory=dict)
    pieces: Optional[PieceSet] = field(default=None, repr=False)

    def __post_init__(self):
        self.A = tuple(Fraction(v) for v in self.A)
        self.B = tuple(Fraction(v) for v in self.B)
        if len(self.A) != len(self.B):
            raise ValueError(f"A has {len(self.A)} points, B has {len(self.B)}")

    @property
    def n(self) -> int:
        return len(self.A)

    @classmethod
    def from_pieces(cls, pieces: PieceSet, answer: int,
                    meta: Optional[Dict[str, Any]] = None) -> 'TciInstance':
        a, b = pieces.flatten()
        return cls(a, b, answer, dict(meta or {}), pieces)


def _base_pieces(bits: Sequence[int], istar: int) -> PieceSet:
    n = len(bits) + 1
    alice = StepPiece(bits, 0, (1, 0))
    a = alice.values()
    a_star = a[istar - 1]
    p2 = (istar, a_star + istar + 1)
    p1 = (n, max(Fraction(1), a_star + 2 * istar + 1 - n))
    return PieceSet((alice,), (LinePiece(p1, p2, 1, n),))


def tci_base(bits: Sequence[int], istar: int) -> TciInstance:
    """Instance encoding an augmented-indexing input (bits, i*).

    A = StepCurve(bits, 0); B is the line through (i*, a_{i*} + i* + 1) and
    (n, max(1, a_{i*} + 2i* + 1 − n)). The answer is i* when bit i* is set
    and i* + 1 otherwise.
    """
    bits = tuple(int(b) for b in bits)
    if any(b not in (0, 1) for b in bits):
        raise ValueError("bits must be 0 or 1")
    n = len(bits) + 1
    if not 1 <= istar <= n - 1:
        raise ValueError(f"i* = {istar} outside [1, {n - 1}]")
    answer = istar if bits[istar - 1] == 1 else istar + 1
    meta = {'parity': 'base', 'r': 1, 'N': n, 'x': list(bits), 'istar': istar}
    return TciInstance.from_pieces(_base_pieces(bits, istar), answer, meta)


def _block_place(sub: TciInstance, alpha: Fraction, target: PointT, side: Side) -> PieceSet:
    sheared = slope_shift(sub.pieces, alpha, sub.answer)
    return origin_shift(sheared, target, side)


def _extend(pieces: Sequence[CurvePiece], first: int, last: int) -> Tuple[CurvePiece, ...]:
    """Continue a curve to positions first..last along its end segments."""
    values = _flatten(pieces)
    start, stop = pieces[0].start, pieces[-1].stop
    out: List[CurvePiece] = []
    if start > first:
        out.append(LinePiece((start, values[0]), (start + 1, values[1]), first, start - 1))
    out.extend(pieces)
    if stop < last:
        out.append(LinePiece((stop - 1, values[-2]), (stop, values[-1]), stop + 1, last))
    return tuple(out)


def tci_recursive(r: int, N: int, rng: Union[RngStreams, int] = 0) -> TciInstance:
    """Instance(r) with n = N^r points per player.

    Round one draws (bits, i*) uniformly and calls ``tci_base``. Round r
    draws N independent Instance(r−1) blocks, places them, and only then
    draws the special block z*.
    """
    if r < 1:
        raise ValueError(f"r must be at least 1, got {r}")
    if N < 2:
        raise ValueError(f"N must be at least 2, got {N}")
    streams = rng if isinstance(rng, RngStreams) else RngStreams(int(rng), ("tci",))
    inst = _instance(r, N, streams)
    inst.meta['rng_log'] = [list(path) for path in streams.log]
    return inst


def _instance(r: int, N: int, streams: RngStreams) -> TciInstance:
    if r == 1:
        g = streams.generator("base")
        bits = [int(v) for v in g.integers(0, 2, size=N - 1)]
        istar = int(g.integers(1, N))
        return tci_base(bits, istar)

    n_sub = N ** (r - 1)
    n = N ** r
    subs = [_instance(r - 1, N, streams.child("block", i)) for i in range(1, N + 1)]
    even = r % 2 == 0
    placed: List[Optional[PieceSet]] = [None] * N
    alphas: List[Fraction] = [Fraction(0)] * N
    targets: List[PointT] = [(Fraction(0), Fraction(0))] * N

    order = range(N - 1, -1, -1) if even else range(N)
    for j in order:
        neighbour = j + 1 if even else j - 1
        if 0 <= neighbour < N:
            na, nb = placed[neighbour].flatten()
            alphas[j] = max_abs_slope(na, nb)
            if even:
                targets[j] = (Fraction((j + 1) * n_sub), nb[0] + alphas[j])
            else:
                targets[j] = (Fraction(j * n_sub + 1), na[-1] + alphas[j])
        else:
            targets[j] = (Fraction(n), Fraction(0)) if even else (Fraction(1), Fraction(0))
        placed[j] = _block_place(subs[j], alphas[j], targets[j], Side.BOB if even else Side.ALICE)

    zstar = int(streams.generator("zstar").integers(1, N + 1))
    special = placed[zstar - 1]
    if even:
        alice = _extend(special.alice, 1, n)
        bob = tuple(p for block in placed for p in block.bob)
    else:
        alice = tuple(p for block in placed for p in block.alice)
        bob = _extend(special.bob, 1, n)
    joined = PieceSet(alice, bob)
    shift = (Fraction(0), -joined.alice_leftmost()[1])
    normalized = origin_shift(joined, (1, 0), Side.ALICE)

    answer = (zstar - 1) * n_sub + subs[zstar - 1].answer
    meta = {
        'parity': 'even' if even else 'odd',
        'r': r,
        'N': N,
        'zstar': zstar,
        'alphas': alphas,
        'targets': targets,
        'shift': shift,
        'special': subs[zstar - 1],
        'fooling': [block.flatten() for block in placed],
    }
    logger.debug("TCI round %d: z*=%d answer=%d", r, zstar, answer)
    return TciInstance.from_pieces(normalized, answer, meta)
