import dataclasses
import random
from fractions import Fraction

import pytest

from shallowcast import (
    NetworkSpec,
    SubstreamMatrix,
    UnsustainableError,
    brute_force_feasibility,
    plan,
    verify_plan,
)

from conftest import random_sustainable_spec, three_site_tight

F = Fraction


class TestVerifyPlan:
    def test_tight_three_site_all_checks_pass(self):
        result = plan(three_site_tight())
        report = verify_plan(result)
        assert report.passed
        assert report.failed_names() == ()
        assert [c.name for c in report.checks] == [
            "valid_partition",
            "uplink_capacity",
            "downlink_capacity",
            "tree_height",
            "trace_nonnegative",
            "trace_row_completion",
            "trace_residual_bound",
            "throughput",
        ]

    def test_tree_usage_arithmetic_matches_hand_computation(self):
        # Independent arithmetic over the four trees: each site's sends are
        # rate times its child count, summed across trees.
        result = plan(three_site_tight())
        usage = [F(0)] * 3
        for tree in result.trees:
            usage[tree.source] += tree.rate * tree.children_of(tree.source)
            if tree.relay is not None:
                usage[tree.relay] += tree.rate * len(tree.leaves)
        # site 1: own direct 3*2, plus fanning out site 2's relayed slice 4*1
        assert usage == [F(2), F(10), F(6)]
        assert usage[1] == three_site_tight().uplink[1]  # saturated exactly
        assert tuple(usage) == result.uplink_usage

    def test_inflated_tree_rate_fails_partition_and_uplink(self):
        result = plan(three_site_tight())
        trees = list(result.trees)
        trees[2] = dataclasses.replace(trees[2], rate=trees[2].rate + 1)  # relay tree 4 -> 5
        broken = dataclasses.replace(result, trees=tuple(trees))

        report = verify_plan(broken)
        assert not report.passed

        partition = report.check("valid_partition")
        assert not partition.passed
        assert any(f.lhs == F(6) and f.rhs == F(5) for f in partition.failures)

        uplink = report.check("uplink_capacity")
        assert not uplink.passed
        exact = {(f.locus, f.lhs, f.rhs) for f in uplink.failures}
        assert ("site 1", F(11), F(10)) in exact
        assert ("site 2", F(7), F(6)) in exact

    def test_dropped_tree_detected_from_trees_not_matrix(self):
        # The matrix still says every row sums correctly; only the tree list
        # betrays the missing delivery.
        result = plan(three_site_tight())
        broken = dataclasses.replace(result, trees=result.trees[:-1])
        report = verify_plan(broken)
        assert not report.passed
        assert "valid_partition" in report.failed_names()
        assert "downlink_capacity" in report.failed_names()  # stream 2 under-delivered
        assert "throughput" in report.failed_names()

    def test_usage_checks_ignore_the_matrix(self):
        # Doubling the matrix must not move the capacity checks (trees are the
        # source of truth); only the row-sum criterion may complain.
        result = plan(three_site_tight())
        doubled = SubstreamMatrix(
            rows=tuple(tuple(2 * v for v in row) for row in result.matrix.rows)
        )
        broken = dataclasses.replace(result, matrix=doubled)
        report = verify_plan(broken)
        assert report.check("uplink_capacity").passed
        assert report.check("downlink_capacity").passed
        assert report.check("throughput").passed
        assert not report.check("valid_partition").passed

    def test_single_site_empty_plan_vacuously_passes(self):
        result = plan(NetworkSpec(uplink=(1,), downlink=(None,), rates=(5,)))
        report = verify_plan(result)
        assert report.passed

    def test_failures_carry_exact_locus(self):
        result = plan(three_site_tight())
        trees = list(result.trees)
        trees[0] = dataclasses.replace(trees[0], rate=F(3, 2))
        report = verify_plan(dataclasses.replace(result, trees=tuple(trees)))
        partition = report.check("valid_partition")
        assert any(f.locus == "site 0" for f in partition.failures)
        delivery = report.check("downlink_capacity")
        assert any("stream 0" in f.locus for f in delivery.failures)

    def test_random_plans_pass(self):
        rng = random.Random(3)
        for _ in range(60):
            spec = random_sustainable_spec(rng, max_n=30)
            report = verify_plan(plan(spec))
            assert report.passed, report.failed_names()


class TestBruteForce:
    def test_tight_three_site_has_integral_witness(self):
        assert brute_force_feasibility(three_site_tight(), granularity=1)

    def test_unsustainable_instance_has_no_witness(self):
        spec = NetworkSpec(uplink=(2, 2, 2), downlink=(None, None, None), rates=(1, 1, 2))
        with pytest.raises(UnsustainableError):
            plan(spec)
        assert not brute_force_feasibility(spec, granularity=1)

    def test_two_site_boundary_exchange(self):
        spec = NetworkSpec(uplink=(1, 1), downlink=(None, None), rates=(1, 1))
        assert brute_force_feasibility(spec, granularity=1)

    def test_downlink_shortfall_infeasible(self):
        spec = NetworkSpec(uplink=(10, 10), downlink=(None, F(1, 2)), rates=(1, 1))
        assert not brute_force_feasibility(spec, granularity=2)

    def test_single_site_trivially_feasible(self):
        assert brute_force_feasibility(NetworkSpec(uplink=(1,), downlink=(None,), rates=(5,)), 1)

    def test_large_instance_rejected(self):
        spec = NetworkSpec(uplink=(1,) * 5, downlink=(None,) * 5, rates=(0,) * 5)
        with pytest.raises(ValueError):
            brute_force_feasibility(spec, granularity=1)

    def test_unrepresentable_rate_rejected(self):
        spec = NetworkSpec(uplink=(1, 1), downlink=(None, None), rates=(F(1, 3), 0))
        with pytest.raises(ValueError):
            brute_force_feasibility(spec, granularity=2)
        assert brute_force_feasibility(spec, granularity=3)

    def test_bad_granularity_rejected(self):
        with pytest.raises(ValueError):
            brute_force_feasibility(three_site_tight(), granularity=0)

    def test_fractional_witness_needed_when_grid_too_coarse(self):
        # Sustainable, but the only feasible splits put half-integral slices on
        # sites 3 and 4, so the unit grid misses every witness.
        spec = NetworkSpec(uplink=(3, 7, 1, 1), downlink=(None,) * 4, rates=(3, 1, 0, 0))
        assert brute_force_feasibility(spec, granularity=2)
        assert not brute_force_feasibility(spec, granularity=1)

    def test_agrees_with_planner_on_small_instances(self):
        rng = random.Random(19)
        for _ in range(60):
            n = rng.randint(1, 4)
            spec = random_sustainable_spec(rng, n=n, integer=True)
            assert verify_plan(plan(spec)).passed
            assert brute_force_feasibility(spec, granularity=max(1, n - 2))

    def test_feasibility_equivalent_to_sustainability_on_exact_grid(self):
        # With n <= 3 the assignment denominators are integral, so for integer
        # instances a unit-grid witness exists iff the rates are sustainable;
        # raw random capacities probe both directions of the equivalence.
        from shallowcast import is_sustainable

        rng = random.Random(43)
        seen_infeasible = 0
        for _ in range(150):
            n = rng.randint(2, 3)
            rates = tuple(F(rng.randint(0, 4)) for _ in range(n))
            uplink = tuple(F(rng.randint(0, 6)) for _ in range(n))
            downlink = tuple(None if rng.random() < 0.5 else F(rng.randint(0, 8)) for _ in range(n))
            spec = NetworkSpec(uplink=uplink, downlink=downlink, rates=rates)
            sustainable = is_sustainable(spec).sustainable
            assert brute_force_feasibility(spec, granularity=1) == sustainable
            seen_infeasible += not sustainable
        assert seen_infeasible >= 30  # the probe covers both outcomes
