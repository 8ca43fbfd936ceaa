"""Tests for values, elements and the small exact solver."""
from fractions import Fraction

import numpy as np
import pytest

from lptype_nets.generators.random_instances import gen_meb_points, gen_random_lp, gen_svm_separable
from lptype_nets.solvers.lptype import (DEFAULT_BOX, Halfspace, LabeledPoint, LpValue, MebValue,
                                        Ordering, Point, SvmValue, order_compare, violates)
from lptype_nets.solvers.problems import (LpInstance, MebInstance, SvmInstance,
                                          lp_solve_lexmin_sequential, lp_violation_scan, meb_solve,
                                          meb_violation_scan, svm_solve, svm_violation_scan,
                                          violation_scan)
from lptype_nets.solvers.small_solver import reduce_to_basis, solve_small
from lptype_nets.utils.errors import Infeasible, KindMismatch, Unbounded
from lptype_nets.utils.precision import WeightBase
from lptype_nets.verification.oracle import brute_lp, brute_meb, brute_svm


def test_order_compare_examples():
    """Objective first, then the point lexicographically."""
    assert order_compare(LpValue(0, (0, 0)), LpValue(0, (0, 0))) is Ordering.EQ
    assert order_compare(LpValue(1, (5, 5)), LpValue(2, (0, 0))) is Ordering.LT
    assert order_compare(LpValue(1, (0, 3)), LpValue(1, (1, 0))) is Ordering.LT
    assert order_compare(MebValue(2, (0, 0)), MebValue(1, (9, 9))) is Ordering.GT


def test_order_compare_rejects_mixed_kinds():
    with pytest.raises(KindMismatch):
        order_compare(LpValue(0, (0, 0)), SvmValue(1, (1, 0)))


def test_violates_examples():
    origin = LpValue(0, (0, 0))
    assert not violates(origin, Halfspace((1, 1), 1))
    assert violates(origin, Halfspace((-1, 0), -1))
    assert violates(MebValue(1, (1, 0)), Point((3, 0)))
    assert violates(None, Point((0, 0)))


def test_vee_lp_and_basis(vee):
    """The apex of the vee is the optimum and its two sides the basis."""
    value, basis = solve_small(vee.elements, vee.definition)
    assert value == LpValue(0, (0, 0))
    assert str(value) == "objective 0, point (0, 0)"
    assert basis.indices == (0, 1)


def test_lexmin_with_vacuous_objective():
    core = [Halfspace((-1, 0), -1), Halfspace((0, -1), -2)]
    inst = LpInstance.with_box(2, (0, 0), core, Fraction(10))
    value, _ = solve_small(inst.elements, inst.definition)
    assert value.point == (1, 2)
    assert lp_solve_lexmin_sequential(inst) == value


def test_box_only_lp_goes_to_lexmin_corner():
    inst = LpInstance.with_box(2, (1, 0), [], DEFAULT_BOX)
    value, _ = solve_small(inst.elements, inst.definition)
    assert value.point == (-DEFAULT_BOX, -DEFAULT_BOX)
    assert value.objective == -DEFAULT_BOX


def test_missing_box_is_unbounded():
    inst = LpInstance.with_box(2, (0, 1), [Halfspace((1, -1), 0)], None)
    with pytest.raises(Unbounded):
        solve_small(inst.elements, inst.definition)


def test_infeasible_lp():
    inst = LpInstance.with_box(2, (0, 1), [Halfspace((1, 0), -1), Halfspace((-1, 0), -1)])
    with pytest.raises(Infeasible):
        solve_small(inst.elements, inst.definition)


def test_meb_examples():
    """Diameter pair, three cospherical points, and an interior point dropped from the basis."""
    pair = MebInstance(2, [Point((0, 0)), Point((2, 0))])
    assert solve_small(pair.elements, pair.definition)[0] == MebValue(1, (1, 0))

    three = MebInstance(2, [Point((0, 0)), Point((2, 0)), Point((1, 1))])
    value, basis = solve_small(three.elements, three.definition)
    assert value.radius_sq == 1 and value.center == (1, 0)
    assert len(basis) <= 3

    inner = MebInstance(2, [Point((0, 0)), Point((2, 0)), Point((1, Fraction(1, 2)))])
    value, basis = solve_small(inner.elements, inner.definition)
    assert set(basis.elements) == {Point((0, 0)), Point((2, 0))}


def test_svm_antipodal_pair():
    inst = SvmInstance(2, [LabeledPoint((1, 0), 1), LabeledPoint((-1, 0), -1)])
    value, _ = solve_small(inst.elements, inst.definition)
    assert value == SvmValue(1, (1, 0))


def test_svm_homogeneity():
    """Scaling samples by t scales u by 1/t."""
    inst = gen_svm_separable(12, 2, seed=4)
    t = Fraction(3)
    scaled = SvmInstance(2, [LabeledPoint(tuple(t * v for v in s.x), s.y) for s in inst.samples])
    u = solve_small(inst.elements, inst.definition)[0]
    v = solve_small(scaled.elements, scaled.definition)[0]
    assert v.u == tuple(x / t for x in u.u)
    assert v.norm_sq == u.norm_sq / (t * t)


def test_problem_solvers():
    pair = MebInstance(2, [Point((0, 0)), Point((2, 0))])
    assert meb_solve(pair) == MebValue(1, (1, 0))
    svm = SvmInstance(2, [LabeledPoint((1, 0), 1), LabeledPoint((-1, 0), -1)])
    assert svm_solve(svm) == SvmValue(1, (1, 0))


def test_svm_separable_check():
    """Same-side points with opposite labels cannot be separated through the origin."""
    inst = SvmInstance(2, [LabeledPoint((1, 0), 1), LabeledPoint((2, 0), -1)])
    with pytest.raises(Infeasible):
        svm_solve(inst)


def test_reduce_to_basis_drops_slack_elements(vee):
    inner = MebInstance(2, [Point((0, 0)), Point((2, 0)), Point((1, Fraction(1, 2)))])
    basis = reduce_to_basis(inner.elements, MebValue(1, (1, 0)), inner.definition)
    assert basis.indices == (0, 1)
    assert basis.value == MebValue(1, (1, 0))

    basis = reduce_to_basis(vee.elements, LpValue(0, (0, 0)), vee.definition)
    assert basis.indices == (0, 1)


def test_singleton_basis():
    inst = MebInstance(2, [Point((3, 4))])
    value, basis = solve_small(inst.elements, inst.definition)
    assert value.radius_sq == 0
    assert basis.indices == (0,)


@pytest.mark.parametrize("seed", range(5))
def test_solver_matches_oracles(seed):
    """LP, SVM and MEB agree with brute-force enumeration exactly."""
    lp = gen_random_lp(25, 2, seed)
    assert solve_small(lp.elements, lp.definition)[0] == brute_lp(lp)
    assert lp_solve_lexmin_sequential(lp) == brute_lp(lp)

    meb = gen_meb_points(15, 2, seed)
    assert solve_small(meb.elements, meb.definition)[0] == brute_meb(meb)

    svm = gen_svm_separable(15, 2, seed)
    assert solve_small(svm.elements, svm.definition)[0] == brute_svm(svm)


def test_solver_is_deterministic_given_seed():
    lp = gen_random_lp(40, 3, seed=2)
    a = solve_small(lp.elements, lp.definition, np.random.default_rng(5))
    b = solve_small(lp.elements, lp.definition, np.random.default_rng(5))
    assert a == b


def test_monotonicity_on_subsets():
    lp = gen_random_lp(30, 2, seed=9)
    small = lp.elements[10:]
    sub_value = solve_small(small, lp.definition)[0]
    full_value = solve_small(lp.elements, lp.definition)[0]
    assert order_compare(sub_value, full_value) in (Ordering.LT, Ordering.EQ)


def test_basis_minimality():
    """Dropping any basis element strictly lowers the optimum."""
    meb = gen_meb_points(20, 2, seed=1)
    value, basis = solve_small(meb.elements, meb.definition)
    for i in range(len(basis)):
        rest = basis.elements[:i] + basis.elements[i + 1:]
        if rest:
            assert order_compare(solve_small(rest, meb.definition)[0], value) is Ordering.LT


def test_violation_scan_examples():
    value = LpValue(0, (0, 0))
    constraints = [Halfspace((1, 0), 1), Halfspace((-1, 0), -1), Halfspace((0, 1), 0)]
    violators, _, _ = lp_violation_scan(value, constraints)
    assert violators == [1]

    ball = MebValue(1, (1, 0))
    violators, _, _ = meb_violation_scan(ball, [Point((1, 1)), Point((5, 0))])
    assert violators == [1]

    u = SvmValue(1, (1, 0))
    samples = [LabeledPoint((2, 0), 1), LabeledPoint((1, 5), -1),
               LabeledPoint((Fraction(1, 2), 0), 1)]
    violators, _, _ = svm_violation_scan(u, samples)
    assert violators == [1, 2]


def test_weighted_violation_scan():
    """Exponents (0, 1, 0) with base 2: w(V) = 2 and w(S) = 4."""
    value = LpValue(0, (0, 0))
    constraints = [Halfspace((1, 0), 1), Halfspace((-1, 0), -1), Halfspace((0, 1), 0)]
    _, hist_v, hist_s = violation_scan(value, constraints, [0, 1, 0])
    base = WeightBase(4, 2)
    assert base.evaluate(hist_v) == 2
    assert base.evaluate(hist_s) == 4


def test_scan_rejects_wrong_kind():
    with pytest.raises(KindMismatch):
        lp_violation_scan(LpValue(0, (0, 0)), [Point((0, 0))])


@pytest.mark.parametrize("make", [gen_random_lp, gen_meb_points, gen_svm_separable])
def test_locality_on_random_subsets(make):
    """X ⊆ Y with f(X) = f(Y) = f(X ∪ {e}) implies f(Y ∪ {e}) = f(Y)."""
    inst = make(16, 2, seed=11)
    definition = inst.definition
    box = list(definition.box_elements())
    free = [e for e in inst.elements if e not in box]
    g = np.random.default_rng(0)
    checked = 0
    for _ in range(30):
        picked = g.permutation(len(free))
        Y = box + [free[i] for i in picked[:9]]
        outside = [free[i] for i in picked[9:]]
        f_y, basis = solve_small(Y, definition)
        rest = [e for e in Y if e not in basis.elements]
        kept = rest[:int(g.integers(0, len(rest) + 1))]
        X = list(dict.fromkeys(box + list(basis.elements) + kept))
        f_x = solve_small(X, definition)[0]
        if f_x != f_y:
            continue
        for e in outside:
            if solve_small(X + [e], definition)[0] == f_x:
                checked += 1
                assert solve_small(Y + [e], definition)[0] == f_y
    assert checked > 0


@pytest.mark.slow
def test_sequential_lexmin_matches_small_solver():
    for seed in range(200):
        lp = gen_random_lp(30, 2 + seed % 2, seed)
        assert lp_solve_lexmin_sequential(lp) == solve_small(lp.elements, lp.definition)[0]
