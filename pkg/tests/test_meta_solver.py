"""Tests for net parameters, weighted sampling and the in-memory meta-algorithm."""
from collections import Counter
from decimal import Decimal
from fractions import Fraction

import numpy as np
import pytest
from scipy.stats import chisquare

from lptype_nets.generators.random_instances import gen_meb_points, gen_random_lp, gen_svm_separable
from lptype_nets.solvers.lptype import Basis, Halfspace, LpValue, Ordering, order_compare
from lptype_nets.solvers.meta_solver import (Mode, NetParams, WeightState, epsilon_for, net_size,
                                             run_meta, sample_net, weight_of)
from lptype_nets.utils.errors import MonteCarloFail, RangeError
from lptype_nets.verification.oracle import brute_solve

from .instances import make_vee


@pytest.mark.parametrize("nu, n, r, expected", [
    (3, 4096, 12, Fraction(1, 60)),
    (1, 16, 4, Fraction(1, 20)),
    (3, 1000, 3, Fraction(1, 300)),
])
def test_epsilon_exact_roots(nu, n, r, expected):
    assert epsilon_for(nu, n, r) == expected


def test_epsilon_irrational_root_is_decimal():
    eps = epsilon_for(3, 10, 2)
    assert isinstance(eps, Decimal)
    assert abs(float(eps) - 1 / (30 * 10 ** 0.5)) < 1e-12


@pytest.mark.parametrize("r", [0, 13])
def test_epsilon_rejects_r_out_of_range(r):
    with pytest.raises(RangeError):
        epsilon_for(3, 4096, r)


def test_net_size_examples():
    assert net_size(Fraction(1, 60), 3, Fraction(2, 3)) == 10473
    assert net_size(Fraction(1, 2), 1, Fraction(1, 2)) == 45


def test_net_size_rejects_bad_delta():
    with pytest.raises(RangeError):
        net_size(Fraction(1, 2), 1, Fraction(1))


def test_net_params_scale_and_modes(vee):
    definition = vee.definition
    lv = NetParams.for_run(definition, 6, 2, Mode.LAS_VEGAS)
    mc = NetParams.for_run(definition, 6, 2, Mode.MONTE_CARLO)
    assert lv.delta == Fraction(2, 3)
    assert mc.delta == Fraction(1, 18)
    assert mc.m >= lv.m
    tiny = NetParams.for_run(definition, 6, 2, Mode.LAS_VEGAS, Fraction(1, 10 ** 9))
    assert tiny.m == 1


def test_sample_single_element():
    draws = sample_net(WeightState.uniform(1, 1), 50, np.random.default_rng(0))
    assert draws == [0] * 50


def test_sample_respects_weights():
    """Exponents (5, 0, 0) with base 2: Pr[0] = 32/34."""
    weights = WeightState([5, 0, 0], 2, 4)
    draws = sample_net(weights, 20000, np.random.default_rng(1))
    share = draws.count(0) / len(draws)
    assert abs(share - 32 / 34) < 0.01


def test_uniform_sampling_chisquare():
    draws = sample_net(WeightState.uniform(10, 2), 20000, np.random.default_rng(2))
    counts = Counter(draws)
    _, p = chisquare([counts[i] for i in range(10)])
    assert p > 0.001


def test_sample_rejects_empty_weights():
    with pytest.raises(ValueError):
        sample_net(WeightState([], 1, 2), 3, np.random.default_rng(0))


def test_weight_of_counts_violated_bases(vee):
    elements = [Halfspace((-1, 0), -1), Halfspace((1, 0), 1)]
    bases = [Basis((), LpValue(0, (0, 0))), Basis((), LpValue(2, (2, 0)))]
    assert weight_of(0, bases, vee.definition, elements) == 1
    assert weight_of(1, bases, vee.definition, elements) == 1
    assert weight_of(0, bases[1:], vee.definition, elements) == 0


def test_run_meta_vee(vee):
    value, basis, trace = run_meta(vee, 2, rng=0)
    assert value == LpValue(0, (0, 0))
    assert set(basis.indices) == {0, 1}
    assert trace.iterations >= 1
    assert trace.exponents_consistent


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_run_meta_matches_oracle(seed):
    for inst in (gen_random_lp(40, 2, seed), gen_meb_points(30, 2, seed),
                 gen_svm_separable(30, 2, seed)):
        value, _, trace = run_meta(inst, 2, rng=seed)
        assert order_compare(value, brute_solve(inst)) is Ordering.EQ
        assert value == brute_solve(inst)
        assert trace.sandwich_violations == 0


def test_small_nets_still_terminate_with_consistent_weights():
    """A shrunken net forces weight updates; the bookkeeping must stay exact."""
    inst = gen_random_lp(60, 2, seed=5)
    value, _, trace = run_meta(inst, 3, rng=11, net_scale=Fraction(1, 50))
    assert value == brute_solve(inst)
    assert trace.sandwich_violations == 0
    assert trace.exponents_consistent is True
    assert trace.updates <= trace.successes


def test_run_meta_is_reproducible():
    inst = gen_meb_points(40, 3, seed=3)
    first = run_meta(inst, 2, rng=9, net_scale=Fraction(1, 20))
    second = run_meta(inst, 2, rng=9, net_scale=Fraction(1, 20))
    assert first[0] == second[0]
    assert [rec.net_indices for rec in first[2].records] == [rec.net_indices for rec in second[2].records]


def test_monte_carlo_fails_on_unsuccessful_iteration():
    with pytest.raises(MonteCarloFail) as excinfo:
        run_meta(make_vee(), 2, Mode.MONTE_CARLO, rng=0, net_scale=Fraction(1, 10 ** 9))
    assert excinfo.value.trace.failed
    assert excinfo.value.exit_code == 4


def test_las_vegas_iteration_cap():
    with pytest.raises(RuntimeError):
        run_meta(make_vee(), 2, rng=0, net_scale=Fraction(1, 10 ** 9), max_iterations=5)


def test_iteration_budget():
    inst = gen_random_lp(30, 2, seed=0)
    _, _, trace = run_meta(inst, 2, rng=0)
    assert trace.iteration_budget == 3 * 3 * 2
    assert trace.successes <= trace.iteration_budget


@pytest.mark.slow
def test_success_fraction_over_many_iterations():
    """With b = 2 and a 1/16 net, well over 60% of iterations are successful."""
    instances = [gen_meb_points(2048, 2, seed=s) for s in range(4)]
    iterations = successes = 0
    seed = 0
    while iterations < 1000 and seed < 1000:
        _, _, trace = run_meta(instances[seed % 4], 11, rng=seed, net_scale=Fraction(1, 16))
        assert trace.params.m == 655
        iterations += trace.iterations
        successes += trace.successes
        seed += 1
    assert iterations >= 1000
    assert successes / iterations >= 0.6
