#!/usr/bin/env python3
"""
Bit-exact message codec for the distributed simulators.

Messages are written MSB-first into an integer bit buffer. Unbounded
integers carry an Elias-gamma length prefix; a scalar is a signed numerator
and a positive denominator; an element is a tagged, length-prefixed record
of scalars. The bit meter is simply the length of the encoded buffer.
"""

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from ..solvers.lptype import (Basis, Element, Halfspace, LabeledPoint, LpValue, MebValue,
                              Point, SolutionValue, SvmValue)
from .precision import ExponentHistogram, WeightBase

_ELEMENT_TAGS = {Halfspace: 0, LabeledPoint: 1, Point: 2}
_VALUE_TAGS = {LpValue: 0, SvmValue: 1, MebValue: 2}
TAG_BITS = 2


def count_bits(m: int) -> int:
    """Fixed width of a sampled-count message: ⌈log₂(m+1)⌉."""
    return max(1, m.bit_length()) if m > 0 else 1


class BitWriter:
    """Append-only bit buffer."""

    def __init__(self):
        self.value = 0
        self.length = 0

    def __len__(self) -> int:
        return self.length

    def write_fixed(self, v: int, width: int):
        if v < 0 or v >= (1 << width):
            raise ValueError(f"{v} does not fit in {width} bits")
        self.value = (self.value << width) | v
        self.length += width

    def write_bit(self, flag: bool):
        self.write_fixed(1 if flag else 0, 1)

    def write_gamma(self, v: int):
        """Elias gamma code of v+1 (v >= 0)."""
        x = v + 1
        n = x.bit_length()
        if n > 1:
            self.write_fixed(0, n - 1)
        self.write_fixed(x, n)

    def write_uint(self, v: int):
        """Nonnegative big integer: gamma(bit length) then the bits."""
        n = v.bit_length()
        self.write_gamma(n)
        if n:
            self.write_fixed(v, n)

    def write_int(self, v: int):
        self.write_bit(v < 0)
        self.write_uint(abs(v))

    def write_scalar(self, q: Fraction):
        q = Fraction(q)
        self.write_int(q.numerator)
        self.write_uint(q.denominator - 1)

    def write_vector(self, values: Sequence[Fraction]):
        self.write_gamma(len(values))
        for q in values:
            self.write_scalar(q)

    def write_element(self, e: Element):
        self.write_fixed(_ELEMENT_TAGS[type(e)], TAG_BITS)
        if isinstance(e, Halfspace):
            self.write_vector(e.a + (e.b,))
        elif isinstance(e, LabeledPoint):
            self.write_vector(e.x + (Fraction(e.y),))
        else:
            self.write_vector(e.p)

    def write_value(self, v: SolutionValue):
        self.write_fixed(_VALUE_TAGS[type(v)], TAG_BITS)
        if isinstance(v, LpValue):
            self.write_vector((v.objective,) + v.point)
        elif isinstance(v, SvmValue):
            self.write_vector((v.norm_sq,) + v.u)
        else:
            self.write_vector((v.radius_sq,) + v.center)

    def write_basis(self, basis: Basis):
        self.write_gamma(len(basis.elements))
        for e in basis.elements:
            self.write_element(e)
        self.write_value(basis.value)

    def write_histogram(self, hist: ExponentHistogram):
        pairs = hist.items()
        self.write_gamma(len(pairs))
        for exponent, count in pairs:
            self.write_gamma(exponent)
            self.write_uint(count)

    def write_weight(self, hist: ExponentHistogram, base: WeightBase):
        """Exact integer total when the base is integral, else the histogram."""
        self.write_bit(base.exact)
        if base.exact:
            self.write_uint(base.evaluate(hist))
        else:
            self.write_histogram(hist)

    def reader(self) -> 'BitReader':
        return BitReader(self.value, self.length)


class BitReader:
    """Sequential reader over a BitWriter's buffer."""

    def __init__(self, value: int, length: int):
        self.value = value
        self.length = length
        self.pos = 0

    def remaining(self) -> int:
        return self.length - self.pos

    def read_fixed(self, width: int) -> int:
        if width > self.remaining():
            raise ValueError("read past end of message")
        shift = self.length - self.pos - width
        self.pos += width
        return (self.value >> shift) & ((1 << width) - 1)

    def read_bit(self) -> bool:
        return self.read_fixed(1) == 1

    def read_gamma(self) -> int:
        zeros = 0
        while self.read_fixed(1) == 0:
            zeros += 1
        rest = self.read_fixed(zeros) if zeros else 0
        return ((1 << zeros) | rest) - 1

    def read_uint(self) -> int:
        n = self.read_gamma()
        return self.read_fixed(n) if n else 0

    def read_int(self) -> int:
        negative = self.read_bit()
        v = self.read_uint()
        return -v if negative else v

    def read_scalar(self) -> Fraction:
        num = self.read_int()
        den = self.read_uint() + 1
        return Fraction(num, den)

    def read_vector(self) -> Tuple[Fraction, ...]:
        return tuple(self.read_scalar() for _ in range(self.read_gamma()))

    def read_element(self) -> Element:
        tag = self.read_fixed(TAG_BITS)
        values = self.read_vector()
        if tag == 0:
            return Halfspace(values[:-1], values[-1])
        if tag == 1:
            return LabeledPoint(values[:-1], int(values[-1]))
        return Point(values)

    def read_value(self) -> SolutionValue:
        tag = self.read_fixed(TAG_BITS)
        values = self.read_vector()
        cls = {0: LpValue, 1: SvmValue, 2: MebValue}[tag]
        return cls(values[0], values[1:])

    def read_basis(self) -> Basis:
        elements = tuple(self.read_element() for _ in range(self.read_gamma()))
        return Basis(elements, self.read_value())

    def read_histogram(self) -> ExponentHistogram:
        hist = ExponentHistogram()
        for _ in range(self.read_gamma()):
            exponent = self.read_gamma()
            hist.add(exponent, self.read_uint())
        return hist

    def read_weight(self) -> Tuple[Optional[int], Optional[ExponentHistogram]]:
        """(exact total, None) or (None, histogram)."""
        if self.read_bit():
            return self.read_uint(), None
        return None, self.read_histogram()

    def read_weight_histogram(self) -> ExponentHistogram:
        """A weight message as a histogram; an exact total becomes one b^0 bucket."""
        total, hist = self.read_weight()
        if hist is not None:
            return hist
        return ExponentHistogram({0: total}) if total else ExponentHistogram()


def element_bits(e: Element) -> int:
    w = BitWriter()
    w.write_element(e)
    return len(w)


def max_element_bits(elements: Sequence[Element]) -> int:
    """bit(S): the largest encoded element."""
    return max((element_bits(e) for e in elements), default=0)


def gamma_bits(v: int) -> int:
    """Length of ``write_gamma(v)``."""
    return 2 * (v + 1).bit_length() - 1


def uint_bits(v: int) -> int:
    """Length of ``write_uint(v)``; nondecreasing in v."""
    n = v.bit_length()
    return gamma_bits(n) + n


def encode_sample(drawn: Sequence[Tuple[int, Element, int]]) -> BitWriter:
    """Sampled elements as (global index, element, multiplicity) triples."""
    w = BitWriter()
    w.write_gamma(len(drawn))
    for index, e, count in drawn:
        w.write_uint(index)
        w.write_element(e)
        w.write_uint(count)
    return w


def decode_sample(reader: BitReader) -> List[Tuple[int, Element, int]]:
    out = []
    for _ in range(reader.read_gamma()):
        index = reader.read_uint()
        e = reader.read_element()
        out.append((index, e, reader.read_uint()))
    return out
