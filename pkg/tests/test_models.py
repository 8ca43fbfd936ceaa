"""Tests for the streaming, coordinator and MPC execution models."""
import math
from fractions import Fraction

import numpy as np
import pytest

from lptype_nets.generators.random_instances import gen_meb_points, gen_random_lp, gen_svm_separable
from lptype_nets.models.coord_sim import (PartitionScheme, coordinator_sample, partition,
                                          run_coordinator)
from lptype_nets.models.mpc_sim import MpcConfig, _Network, aggregate_weight, broadcast, run_mpc
from lptype_nets.models.stream_sim import ElementStream, run_streaming, weighted_reservoir_pass
from lptype_nets.solvers.meta_solver import WeightState, exponent_of, run_meta, sample_net
from lptype_nets.solvers.small_solver import solve_small
from lptype_nets.utils.codec import BitWriter
from lptype_nets.utils.errors import MemoryExceeded, RangeError, StreamAccessError
from lptype_nets.utils.precision import ExponentHistogram, WeightBase
from lptype_nets.utils.rng_streams import RngStreams
from lptype_nets.verification.oracle import brute_solve


def test_partition_schemes(four_points):
    rr = partition(four_points, 2, PartitionScheme.ROUND_ROBIN)
    assert [s.indices for s in rr] == [[0, 2], [1, 3]]
    cont = partition(four_points, 2, "contiguous")
    assert [s.indices for s in cont] == [[0, 1], [2, 3]]
    ordered = partition(four_points, 2, PartitionScheme.ADVERSARIAL_SORTED)
    assert sorted(i for s in ordered for i in s.indices) == [0, 1, 2, 3]
    assert ordered[0].indices == [0, 3]


def test_partition_given_requires_sites(four_points):
    with pytest.raises(ValueError):
        partition(four_points, 2, PartitionScheme.GIVEN)
    four_points.meta["sites"] = [1, 1, 0, 0]
    given = partition(four_points, 2, PartitionScheme.GIVEN)
    assert [s.indices for s in given] == [[2, 3], [0, 1]]


def test_partition_more_sites_than_elements(four_points):
    sites = partition(four_points, 6, PartitionScheme.CONTIGUOUS)
    assert [len(s.indices) for s in sites] == [1, 1, 1, 1, 0, 0]


def test_mpc_tree_shape():
    config = MpcConfig(Fraction(1, 2), 16, 100, 4)
    assert config.depth == 2
    assert broadcast(BitWriter(), config) == 2
    assert list(config.receivers(1)) == [1, 2, 3]
    assert config.parent(7) == 3
    assert sorted(config.children(0)) == [1, 2, 3, 4, 8, 12]
    assert MpcConfig(Fraction(1, 2), 1, 100, 4).depth == 0


def test_mpc_fanout_must_be_at_least_two():
    with pytest.raises(RangeError):
        MpcConfig(Fraction(1, 2), 4, 10, 1)


def test_aggregate_weight_sums_histograms():
    config = MpcConfig(Fraction(1, 2), 2, 10, 2)
    total, rounds = aggregate_weight(config, [ExponentHistogram({0: 3, 1: 1}),
                                              ExponentHistogram({1: 2})])
    assert total == ExponentHistogram({0: 3, 1: 3})
    assert rounds == 1


class TestStreaming:
    """Streaming runs against the in-memory run with the same seed."""

    @pytest.fixture
    def inst(self):
        return gen_random_lp(40, 2, seed=3)

    def test_two_pass_matches_ram(self, inst):
        scale = Fraction(1, 40)
        value, _, ram = run_meta(inst, 3, rng=5, net_scale=scale)
        streamed, _, trace = run_streaming(inst, 3, rng=5, net_scale=scale)
        assert streamed == value
        assert [b.value for b in trace.meta.bases()] == [b.value for b in ram.bases()]
        assert trace.passes == 2 * trace.iterations + 1
        assert trace.meta.exponents_consistent

    def test_fused_saves_passes(self, inst):
        scale = Fraction(1, 40)
        value, _, two_pass = run_streaming(inst, 3, rng=5, net_scale=scale)
        fused_value, _, fused = run_streaming(inst, 3, rng=5, fused=True, net_scale=scale)
        assert fused_value == value
        assert fused.iterations == two_pass.iterations
        assert fused.passes == fused.iterations + 1
        assert fused.fused

    def test_stored_bases_bounded_by_successes(self, inst):
        _, _, trace = run_streaming(inst, 3, rng=1, net_scale=Fraction(1, 40))
        assert trace.peak_stored_bases <= trace.meta.successes
        assert trace.peak_stored_elements <= len(inst.elements)
        assert trace.peak_bits > 0

    @pytest.mark.parametrize("fused", [False, True])
    def test_stream_changing_between_passes_is_flagged(self, fused):
        """Pass totals that disagree with the weight bookkeeping clear exponents_consistent."""
        meb = gen_meb_points(40, 2, seed=3)
        opened = []

        def source():
            opened.append(len(opened))
            return meb.elements if len(opened) == 1 else meb.elements[:-1]

        stream = ElementStream(source, n=len(meb.elements))
        _, _, trace = run_streaming(meb, 3, rng=5, fused=fused, net_scale=Fraction(1, 40),
                                    stream=stream)
        assert trace.meta.exponents_consistent is False

    def test_random_access_is_refused(self, inst):
        stream = ElementStream(inst.elements)
        with pytest.raises(StreamAccessError):
            stream.read_at(0)

    def test_reservoir_pass_matches_in_memory_sampling(self):
        """A streamed pass draws the same net as sample_net on the same exponents."""
        meb = gen_meb_points(40, 2, seed=3)
        _, basis = solve_small(meb.elements[:5], meb.definition)
        exponents = [exponent_of(e, [basis], meb.definition) for e in meb.elements]
        assert any(exponents)
        expected = sample_net(WeightState(exponents, 3, 40), 7, np.random.default_rng(11))
        drawn = weighted_reservoir_pass(ElementStream(meb.elements), [basis], 7,
                                        meb.definition, 3, np.random.default_rng(11))
        assert drawn == expected


class TestCoordinator:

    def test_sample_draws_m_elements(self):
        inst = gen_meb_points(16, 2, seed=5)
        sites = partition(inst, 3)
        net, total = coordinator_sample(sites, 5, WeightBase(16, 2), RngStreams(0))
        assert len(net) == 5
        assert all(inst.elements[i] == e for i, e in net)
        assert total == ExponentHistogram({0: 16})

    def test_site_reports_violator_count_and_bumps_received_basis(self, four_points):
        """A site bumps against the basis it decoded, once per successful iteration."""
        site = partition(four_points, 1)[0]
        base = WeightBase(4, 2)
        sent = BitWriter()
        sent.write_basis(solve_small(four_points.elements[:1], four_points.definition)[1])
        received = sent.reader().read_basis()

        reply = site.violation_message(received, base).reader()
        assert reply.read_weight_histogram() == ExponentHistogram({0: 3})
        assert reply.read_uint() == 3

        weight = site.weight_message(True, base).reader().read_weight_histogram()
        assert site.local_exponents == [0, 1, 1, 1]
        assert site.known_bases[0] is received
        assert weight == ExponentHistogram({0: 7})
        site.weight_message(True, base)
        assert site.local_exponents == [0, 1, 1, 1]
        assert site.exponents_consistent(four_points.definition)

    def test_failed_iteration_leaves_exponents(self, four_points):
        site = partition(four_points, 2)[1]
        base = WeightBase(4, 2)
        _, basis = solve_small(four_points.elements[:1], four_points.definition)
        site.violation_message(basis, base)
        site.weight_message(False, base)
        assert site.local_exponents == [0, 0]
        assert site.known_bases == []
        assert site.pending == [] and site.received is None

    def test_records_carry_global_indices(self):
        inst = gen_meb_points(30, 2, seed=2)
        _, _, trace = run_coordinator(inst, 3, 2, rng=1, net_scale=Fraction(1, 300))
        for rec in trace.meta.records:
            assert len(rec.net_indices) == trace.meta.params.m
            assert all(0 <= i < len(inst.elements) for i in rec.net_indices)
        assert trace.meta.records[-1].violators == 0

    @pytest.mark.parametrize("k", [1, 2, 5])
    @pytest.mark.parametrize("scheme", ["roundRobin", "contiguous", "adversarialSorted"])
    def test_answer_independent_of_partition(self, k, scheme):
        inst = gen_meb_points(30, 2, seed=2)
        value, _, trace = run_coordinator(inst, k, 2, rng=4, scheme=scheme)
        assert value == brute_solve(inst)
        assert trace.rounds == 3 * trace.iterations
        assert trace.meta.exponents_consistent

    def test_bits_are_metered(self):
        inst = gen_svm_separable(30, 2, seed=1)
        value, _, trace = run_coordinator(inst, 4, 2, rng=0, net_scale=Fraction(1, 30))
        assert value == brute_solve(inst)
        assert len(trace.bits_up) == 4 and len(trace.bits_down) == 4
        assert trace.total_bits == sum(trace.bits_up) + sum(trace.bits_down)
        assert all(b > 0 for b in trace.bits_down)


class TestMpc:

    @pytest.mark.parametrize("delta", [Fraction(1, 4), Fraction(1, 3), Fraction(1, 2), Fraction(1)])
    def test_answer_independent_of_delta(self, delta):
        inst = gen_random_lp(40, 2, seed=6)
        value, _, trace = run_mpc(inst, delta, rng=2)
        assert value == brute_solve(inst)
        assert trace.load_within_cap
        assert trace.meta.exponents_consistent

    def test_round_parameter_clamped(self):
        inst = gen_meb_points(12, 2, seed=0)
        _, _, trace = run_mpc(inst, Fraction(1, 10), rng=0)
        assert trace.r == 4
        assert trace.config.machine_count >= 1

    def test_delta_outside_unit_interval(self):
        with pytest.raises(RangeError):
            run_mpc(gen_meb_points(12, 2, seed=0), Fraction(3, 2))

    def test_round_budget(self):
        assert MpcConfig(Fraction(1, 2), 4, 10, 2).round_budget_bits is None
        assert MpcConfig(Fraction(1, 2), 4, 10, 2, slot_bits=7).round_budget_bits == 70

    def test_over_budget_send_raises(self):
        """Tree rounds add fan-out times the message to the budget; other rounds do not."""
        config = MpcConfig(Fraction(1, 2), 4, 2, 2, slot_bits=3)
        msg = BitWriter()
        msg.write_fixed(0, 7)
        assert broadcast(msg, config) == 2
        network = _Network(config)
        network.begin("sample")
        with pytest.raises(MemoryExceeded):
            network.send(1, 0, msg)
        assert network.headroom_bits == -1

    def test_small_net_keeps_load_within_budget(self):
        """A small net runs many iterations; every round stays within its budget."""
        inst = gen_meb_points(150, 2, seed=0)
        value, _, trace = run_mpc(inst, Fraction(1, 2), rng=0, net_scale=Fraction(1, 2000))
        assert value == solve_small(inst.elements, inst.definition)[0]
        assert trace.headroom_bits is not None
        assert trace.load_within_cap
        assert trace.meta.exponents_consistent
        assert trace.slot_bits >= trace.bit_s
        for rec in trace.meta.records:
            assert len(rec.net_indices) == trace.m
            assert all(0 <= i < len(inst.elements) for i in rec.net_indices)
        assert trace.meta.records[-1].violators == 0

    def test_memory_cap_is_enforced(self):
        inst = gen_meb_points(150, 2, seed=0)
        with pytest.raises(MemoryExceeded):
            run_mpc(inst, Fraction(1, 2), rng=0, memory_cap=12)


INSTANCES = {
    "lp": lambda: gen_random_lp(100, 2, seed=7),
    "meb": lambda: gen_meb_points(100, 2, seed=7),
    "svm": lambda: gen_svm_separable(100, 2, seed=7),
}


@pytest.mark.parametrize("kind", sorted(INSTANCES))
class TestSmallNetRuns:
    """Small nets force several iterations; every model must reach the oracle value."""

    r = 5
    delta = Fraction(1, 5)
    scale = Fraction(1, 500)

    @pytest.fixture
    def inst(self, kind):
        return INSTANCES[kind]()

    @pytest.fixture
    def ram(self, inst):
        value, _, trace = run_meta(inst, self.r, rng=3, net_scale=self.scale)
        assert value == solve_small(inst.elements, inst.definition)[0]
        return value, trace

    def test_streaming_follows_ram(self, inst, ram):
        value, trace = ram
        bases = [b.value for b in trace.bases()]
        for fused in (False, True):
            streamed, _, st = run_streaming(inst, self.r, rng=3, fused=fused,
                                            net_scale=self.scale)
            assert streamed == value
            assert [b.value for b in st.meta.bases()] == bases
            assert st.meta.exponents_consistent
            assert st.iterations == trace.iterations

    def test_coordinator_and_mpc_agree(self, inst, ram):
        value, trace = ram
        coord_value, _, coord = run_coordinator(inst, 3, self.r, rng=3, net_scale=self.scale)
        mpc_value, _, mpc = run_mpc(inst, self.delta, rng=3, net_scale=self.scale)
        assert coord_value == value and mpc_value == value
        assert coord.meta.exponents_consistent and mpc.meta.exponents_consistent
        assert coord.rounds == 3 * coord.iterations
        assert trace.iterations + coord.iterations + mpc.iterations > 3

        depth = mpc.config.depth
        assert mpc.r == self.r
        assert mpc.rounds == depth + mpc.iterations * (3 * depth + 1)
        assert 3 * depth + 1 <= 2 * (math.ceil(1 / self.delta) + 1) + 1
        assert mpc.load_within_cap
