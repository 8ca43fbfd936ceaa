"""Tests for the LP reductions and instance generators."""
from fractions import Fraction
from itertools import product

import pytest

from lptype_nets.core.file_manager import InstanceFileManager
from lptype_nets.generators.random_instances import gen_digit_lp, gen_random_lp, gen_svm_separable
from lptype_nets.generators.reductions import (combine_2d, decode_digits, disj_to_lp,
                                               disjointness_answer)
from lptype_nets.models.coord_sim import run_coordinator
from lptype_nets.solvers.problems import solve_instance
from lptype_nets.utils.errors import RangeError
from lptype_nets.verification.invariants import ground_truth_errors


@pytest.mark.parametrize("X, objective, answer", [
    ([(1, 0), (1, 1)], -1, 1),
    ([(1, 0), (0, 1)], 0, 0),
])
def test_disjointness_examples(X, objective, answer):
    value = solve_instance(disj_to_lp(X))
    assert value.objective == objective
    assert disjointness_answer(value) == answer


def test_disjointness_exhaustive():
    """Two sites over a 3-element universe: intersecting iff the LP reaches -1."""
    for x, y in product(product((0, 1), repeat=3), repeat=2):
        inst = disj_to_lp([x, y])
        intersect = int(any(a and b for a, b in zip(x, y)))
        value = solve_instance(inst)
        assert disjointness_answer(value) == intersect
        assert value.objective == inst.meta['expected_objective']


def test_disjointness_on_given_sites():
    inst = disj_to_lp([(1, 1, 0), (0, 1, 1), (1, 1, 1)])
    value, _, trace = run_coordinator(inst, 3, 2, rng=0, scheme="given")
    assert value.objective == -1
    assert len(trace.bits_up) == 3


def test_disjointness_rejects_ragged_input():
    with pytest.raises(ValueError):
        disj_to_lp([(1, 0), (1,)])


def test_direct_sum_digits():
    combined = combine_2d([gen_digit_lp(3, 0), gen_digit_lp(5, 1)], 100)
    value = solve_instance(combined)
    assert value.objective == 503
    assert combined.meta['expected_objective'] == 503
    assert decode_digits(value.objective, 100, 2) == [3, 5]


def test_direct_sum_single_instance():
    inst = gen_digit_lp(7, 2)
    combined = combine_2d([inst], 10)
    assert solve_instance(combined).objective == solve_instance(inst).objective == 7


def test_direct_sum_rejects_large_digit():
    with pytest.raises(RangeError):
        combine_2d([gen_digit_lp(12, 0)], 10)


def test_decode_digits_rejects_fractions():
    with pytest.raises(RangeError):
        decode_digits(Fraction(1, 2), 10, 1)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_generators_plant_feasible_points(seed):
    lp = gen_random_lp(30, 3, seed)
    assert ground_truth_errors(lp, solve_instance(lp)) == []
    svm = gen_svm_separable(20, 2, seed, margin=2)
    assert ground_truth_errors(svm, solve_instance(svm)) == []


def test_generators_are_deterministic():
    assert (InstanceFileManager.dumps(gen_random_lp(20, 2, 7))
            == InstanceFileManager.dumps(gen_random_lp(20, 2, 7)))
    assert (InstanceFileManager.dumps(gen_svm_separable(20, 2, 7))
            != InstanceFileManager.dumps(gen_svm_separable(20, 2, 8)))


def test_generator_rejects_too_few_elements():
    with pytest.raises(ValueError):
        gen_random_lp(2, 3)
