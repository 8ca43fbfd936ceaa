"""Tests for the bit-level message codec."""
from fractions import Fraction

import pytest

from lptype_nets.solvers.lptype import Basis, Halfspace, LabeledPoint, LpValue, MebValue, Point
from lptype_nets.utils.codec import (BitWriter, count_bits, decode_sample, element_bits,
                                     encode_sample, gamma_bits, max_element_bits, uint_bits)
from lptype_nets.utils.precision import ExponentHistogram, WeightBase


def test_count_bits():
    assert count_bits(1) == 1
    assert count_bits(8) == 4
    assert count_bits(0) == 1


def test_gamma_code_lengths():
    w = BitWriter()
    w.write_gamma(0)
    assert len(w) == 1
    w.write_gamma(2)
    assert len(w) == 1 + 3


def test_scalars_and_signs():
    w = BitWriter()
    for q in (Fraction(-3, 4), Fraction(0), Fraction(2 ** 40 + 1, 7)):
        w.write_scalar(q)
    r = w.reader()
    assert [r.read_scalar() for _ in range(3)] == [Fraction(-3, 4), 0, Fraction(2 ** 40 + 1, 7)]
    assert r.remaining() == 0


def test_basis_message():
    basis = Basis((Point((0, 0)), Point((2, 0))), MebValue(1, (1, 0)))
    w = BitWriter()
    w.write_basis(basis)
    got = w.reader().read_basis()
    assert got.elements == basis.elements
    assert got.value == basis.value


def test_labeled_point_and_lp_value():
    w = BitWriter()
    w.write_element(LabeledPoint((3, -1), -1))
    w.write_value(LpValue(Fraction(-1, 2), (0, 7)))
    r = w.reader()
    assert r.read_element() == LabeledPoint((3, -1), -1)
    assert r.read_value() == LpValue(Fraction(-1, 2), (0, 7))


def test_weight_message_exact_and_histogram():
    hist = ExponentHistogram({0: 3, 2: 1})
    exact = WeightBase(4, 2)
    w = BitWriter()
    w.write_weight(hist, exact)
    assert w.reader().read_weight() == (3 + 4, None)

    inexact = WeightBase(10, 2)
    w = BitWriter()
    w.write_weight(hist, inexact)
    total, got = w.reader().read_weight()
    assert total is None and got == hist


def test_read_past_end():
    w = BitWriter()
    w.write_fixed(1, 2)
    r = w.reader()
    r.read_fixed(2)
    with pytest.raises(ValueError):
        r.read_bit()


def test_element_bits_grow_with_magnitude():
    small = Halfspace((1, 0), 1)
    large = Halfspace((1, 0), 2 ** 30)
    assert element_bits(large) > element_bits(small)
    assert max_element_bits([small, large]) == element_bits(large)
    assert max_element_bits([]) == 0


@pytest.mark.parametrize("v", [0, 1, 2, 7, 8, 1000])
def test_code_length_helpers(v):
    w = BitWriter()
    w.write_gamma(v)
    assert len(w) == gamma_bits(v)
    w = BitWriter()
    w.write_uint(v)
    assert len(w) == uint_bits(v)


def test_sample_message_carries_global_indices():
    drawn = [(3, Point((1, 2)), 2), (40, Point((Fraction(-1, 2), 0)), 1)]
    msg = encode_sample(drawn)
    assert decode_sample(msg.reader()) == drawn
    assert len(msg) == gamma_bits(2) + sum(uint_bits(i) + element_bits(e) + uint_bits(c)
                                           for i, e, c in drawn)
    assert decode_sample(encode_sample([]).reader()) == []
