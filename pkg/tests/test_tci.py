"""Tests for two-curve intersection instances and their invariant suite."""
from fractions import Fraction
from itertools import product

import pytest

from lptype_nets.generators.reductions import tci_to_lp
from lptype_nets.generators.tci import (Side, StepPiece, crossing_index, line_segment,
                                        origin_shift, slope_shift, step_curve, tci_base,
                                        tci_recursive)
from lptype_nets.solvers.small_solver import solve_small
from lptype_nets.utils.errors import NoCrossing, VerticalLine
from lptype_nets.verification.invariants import (monotone_convex_errors, reconstruct_special,
                                                 rng_trace_oblivious, tci_errors, verify_tci)
from lptype_nets.verification.oracle import brute_tci


def test_step_curve():
    assert step_curve((1, 0, 1), 0) == (0, 2, 4, 8)
    assert step_curve((0,), 0) == (0, 1)
    assert step_curve((0, 0, 0, 0), 0) == (0, 1, 3, 6, 10)


def test_line_segment():
    assert line_segment((0, 0), (4, 2), 0, 4) == (0, Fraction(1, 2), 1, Fraction(3, 2), 2)
    assert line_segment((2, 1), (1, 2), 1, 2) == (2, 1)
    with pytest.raises(VerticalLine):
        line_segment((1, 0), (1, 5), 0, 2)


def test_brute_tci():
    A = [0, 1, 2, 4, 6, 10, 14]
    B = [14, 11, 8, 6, 4, 2, 0]
    assert brute_tci(A, B) == 4
    assert crossing_index([Fraction(v) for v in A], [Fraction(v) for v in B]) == 4
    assert brute_tci((0, 2), (1, Fraction(1, 2))) == 1
    with pytest.raises(NoCrossing):
        brute_tci((3, 4), (2, 1))


def test_tci_base_examples():
    t = tci_base((1, 0), 1)
    assert t.A == (0, 2, 4)
    assert t.B == (2, Fraction(3, 2), 1)
    assert t.answer == 1
    assert tci_base((0, 0), 1).answer == 2


def test_tci_base_rejects_bad_pointer():
    with pytest.raises(ValueError):
        tci_base((1, 0), 3)


def test_tci_base_exhaustive():
    """Every 7-bit input and pointer gives a valid instance with the indexing answer."""
    for bits in product((0, 1), repeat=7):
        for istar in range(1, 8):
            t = tci_base(bits, istar)
            assert tci_errors(t) == []
            assert brute_tci(t.A, t.B) == (istar if bits[istar - 1] else istar + 1)


def test_shear_adds_alpha_to_every_gap():
    piece = StepPiece((1, 0, 1), 0, (0, 0))
    assert piece.sheared(2, 0).values() == (0, 4, 8, 14)


def test_slope_shift_keeps_answer():
    t = tci_base((0, 1, 1, 0), 2)
    shifted = slope_shift(t.pieces, 3, t.answer)
    A, B = shifted.flatten()
    assert brute_tci(A, B) == t.answer
    assert monotone_convex_errors(A, B) == []


def test_origin_shift():
    t = tci_base((1, 0), 1)
    moved = origin_shift(t.pieces, (10, 5), Side.ALICE)
    assert moved.alice_leftmost() == (10, 5)
    A, B = moved.flatten()
    assert A == (5, 7, 9)
    assert B == (7, Fraction(13, 2), 6)
    assert moved.bob_rightmost()[0] == 12


class TestRecursive:

    @pytest.mark.parametrize("r", [1, 2, 3])
    @pytest.mark.parametrize("N", [2, 4])
    def test_invariants(self, r, N):
        t = tci_recursive(r, N, rng=r * 10 + N)
        assert t.n == N ** r
        assert tci_errors(t) == []
        assert rng_trace_oblivious(t.meta['rng_log'])

    def test_special_block_is_recovered(self):
        t = tci_recursive(2, 4, rng=7)
        sub_a, sub_b = reconstruct_special(t)
        assert (sub_a, sub_b) == (t.meta['special'].A, t.meta['special'].B)

    def test_answer_embeds_special_answer(self):
        t = tci_recursive(3, 2, rng=1)
        n_sub = 2 ** 2
        assert t.answer == (t.meta['zstar'] - 1) * n_sub + t.meta['special'].answer

    def test_tampered_answer_is_caught(self):
        t = tci_recursive(2, 2, rng=3)
        t.answer += 1
        assert tci_errors(t)

    def test_same_seed_same_instance(self):
        assert tci_recursive(2, 3, rng=5).A == tci_recursive(2, 3, rng=5).A

    def test_lp_bridge(self):
        t = tci_recursive(2, 3, rng=2)
        lp, rule = tci_to_lp(t)
        assert len(lp.core_constraints()) == 2 * (t.n - 1)
        value, _ = solve_small(lp.elements, lp.definition)
        assert rule(value) == t.answer
        assert verify_tci(t).ok

    def test_rejects_small_parameters(self):
        with pytest.raises(ValueError):
            tci_recursive(0, 3)
        with pytest.raises(ValueError):
            tci_recursive(2, 1)


def test_rng_trace_order():
    assert rng_trace_oblivious([("tci", "block", 1, "base"), ("tci", "zstar")])
    assert not rng_trace_oblivious([("tci", "zstar"), ("tci", "block", 1, "base")])
