"""
Tests for trace capture, discard bounds and the shifting-target drift check
"""
import itertools
from fractions import Fraction

import pytest

from src.models import MedianPolicy, RunReport, TraceEvent, make_sequence
from src.models.algorithm import (
    AlgorithmId,
    HYBRID_4,
    REPEATED_STEP_3,
    SHIFTING_TARGET_4,
    SORTING_ORACLE,
)
from src.services.selection.algorithms import (
    SelectionContext,
    get_algorithm,
    parse_algorithm,
    run_selection,
)
from src.services.selection.instrumentation import (
    check_comparison_accounting,
    check_consecutive,
    check_event_structure,
    check_rank_conservation,
    check_run,
    check_shifting_target_drift,
    check_two_sided_bound,
    comparisons_per_element,
    discard_bound,
    first_drift_threshold,
    second_drift_threshold,
)
from src.services.selection.primitives import ComparisonCounter
from src.utils.errors import BoundNotRegisteredError, TraceStructureError

CLASSIC_5 = AlgorithmId.classic(5)


def event(algorithm, n, i, a1, policy=None, index=0):
    return TraceEvent(
        iteration_index=index,
        n=n,
        i=i,
        algorithm=algorithm,
        policy_used=policy,
        pivot_rank=a1 + 1,
        size_a1=a1,
        size_a2=n - a1 - 1,
        comparisons_delta=0,
    )


class TestDiscardBounds:
    @pytest.mark.parametrize('n', [10, 20, 50, 100, 1000])
    def test_classic_five_exact(self, n):
        bound = discard_bound(CLASSIC_5)
        assert bound.lower_side_bound(n) == 3 * n // 10
        assert bound.upper_side_bound(n) == 3 * n // 10

    @pytest.mark.parametrize('n', [9, 27, 81, 90, 729])
    def test_repeated_three_exact(self, n):
        bound = discard_bound(REPEATED_STEP_3)
        assert bound.lower_side_bound(n) == 2 * n // 9
        assert bound.upper_side_bound(n) == 2 * n // 9

    @pytest.mark.parametrize('n', [16, 64, 160, 16_000])
    def test_hybrid_exact(self, n):
        bound = discard_bound(HYBRID_4)
        assert bound.lower_side_bound(n) == 3 * n // 16
        assert bound.upper_side_bound(n) == 3 * n // 16

    def test_repeated_three_at_27(self):
        assert discard_bound(REPEATED_STEP_3).lower_side_bound(27) == 6
        assert check_two_sided_bound(event(REPEATED_STEP_3, 27, 1, 6))

    def test_classic_five_at_10(self):
        bound = discard_bound(CLASSIC_5)
        assert bound.lower_side_bound(10) == 3
        assert check_two_sided_bound(event(CLASSIC_5, 10, 1, 3))

    def test_shifting_target_bounds_by_policy(self):
        lower = discard_bound(SHIFTING_TARGET_4, MedianPolicy.LOWER)
        assert lower.lower_side_bound(80) == 20
        assert lower.upper_side_bound(80) == 30

    def test_never_negative(self):
        bound = discard_bound(HYBRID_4)
        assert all(bound.lower_side_bound(n) >= 0 for n in range(1, 40))

    def test_baselines_have_no_bound(self):
        with pytest.raises(BoundNotRegisteredError, match="no bound registered"):
            discard_bound(SORTING_ORACLE)
        with pytest.raises(BoundNotRegisteredError):
            discard_bound(SHIFTING_TARGET_4)

    def test_unbalanced_event_fails(self):
        result = check_two_sided_bound(event(CLASSIC_5, 100, 1, 5))
        assert not result
        assert 'need 30' in result.explanation

    def test_structure_checked_first(self):
        broken = event(CLASSIC_5, 10, 1, 3)
        broken.size_a2 = 9
        assert not check_event_structure(broken)
        assert 'structure' in check_two_sided_bound(broken).explanation

    def test_bound_for_wrong_algorithm(self):
        with pytest.raises(TraceStructureError):
            check_two_sided_bound(event(CLASSIC_5, 10, 1, 3), discard_bound(HYBRID_4))


def leaves(count):
    return [None] * count


# Grouping trees: (rank taken, children); a leaf is None
CLASSIC_5_AT_10 = (1, [(3, leaves(5)), (3, leaves(5))])
REPEATED_3_AT_9 = (1, [(2, [(2, leaves(3))] * 3)])
REPEATED_3_AT_27 = (2, [(2, [(2, leaves(3))] * 3)] * 3)
HYBRID_AT_16 = (1, [(3, [(2, leaves(4))] * 4)])


def labellings(tree):
    """
    Every achievable (relation, elements below m) of a grouping tree

    Each leaf is labelled below m, above m, or m itself. relation tells where the
    tree's selected element falls: 'below', 'above', or 'pivot' when it is m. A
    subtree holding m must select m, otherwise m cannot be the final pivot.
    """
    if tree is None:
        return {('below', 1), ('above', 0), ('pivot', 0)}
    rank, children = tree
    outcomes = set()
    for combination in itertools.product(*(labellings(child) for child in children)):
        relations = [relation for relation, _ in combination]
        below = relations.count('below')
        if 'pivot' in relations:
            if relations.count('pivot') > 1 or below != rank - 1:
                continue
            relation = 'pivot'
        elif below >= rank:
            relation = 'below'
        else:
            relation = 'above'
        outcomes.add((relation, sum(count for _, count in combination)))
    return outcomes


def worst_case(tree, n):
    """Fewest elements ≤ m and fewest ≥ m over all inputs where m is the pivot"""
    below = [count for relation, count in labellings(tree) if relation == 'pivot']
    return min(below) + 1, n - max(below)


def group_memberships(n, group_size):
    """Deal 1..n into consecutive groups every possible way; order inside a group is free"""
    def deal(remaining):
        if not remaining:
            yield []
            return
        for group in itertools.combinations(remaining, min(group_size, len(remaining))):
            rest = [rank for rank in remaining if rank not in group]
            for tail in deal(rest):
                yield list(group) + tail
    return deal(list(range(1, n + 1)))


def pivot_sides(algorithm_id, keys):
    algorithm = get_algorithm(algorithm_id)
    elements = make_sequence(keys)
    policy = algorithm.choose_policy(len(elements), 1)
    pivot = algorithm.find_pivot(elements, policy, SelectionContext(ComparisonCounter()), 0)
    return sum(e <= pivot for e in elements), sum(e >= pivot for e in elements)


class TestBoundsAgainstWorstCase:
    @pytest.mark.parametrize('algorithm,n,tree,expected', [
        (CLASSIC_5, 10, CLASSIC_5_AT_10, (3, 6)),
        (REPEATED_STEP_3, 9, REPEATED_3_AT_9, (4, 4)),
        (REPEATED_STEP_3, 27, REPEATED_3_AT_27, (8, 8)),
        (HYBRID_4, 16, HYBRID_AT_16, (6, 6)),
    ])
    def test_registered_bounds_never_exceed_worst_case(self, algorithm, n, tree, expected):
        fewest_at_most, fewest_at_least = worst_case(tree, n)
        assert (fewest_at_most, fewest_at_least) == expected

        bound = discard_bound(algorithm)
        assert bound.lower_side_bound(n) <= fewest_at_most
        assert bound.upper_side_bound(n) <= fewest_at_least

    def test_classic_five_lower_side_is_tight_at_10(self):
        assert discard_bound(CLASSIC_5).lower_side_bound(10) == worst_case(CLASSIC_5_AT_10, 10)[0]

    @pytest.mark.parametrize('algorithm,n,group_size,tree', [
        (CLASSIC_5, 10, 5, CLASSIC_5_AT_10),
        (REPEATED_STEP_3, 9, 3, REPEATED_3_AT_9),
    ])
    def test_pivot_finder_reaches_worst_case(self, algorithm, n, group_size, tree):
        sides = [pivot_sides(algorithm, keys) for keys in group_memberships(n, group_size)]
        assert (min(s[0] for s in sides), min(s[1] for s in sides)) == worst_case(tree, n)


class TestTraces:
    def test_live_run_passes(self, shuffled):
        report = run_selection(parse_algorithm('repeated3'), shuffled(3 ** 7, seed=2), 1_000)
        assert report.iterations
        assert check_run(report)

    def test_accounting(self, shuffled):
        report = run_selection(parse_algorithm('hybrid4'), shuffled(4_000, seed=4), 77)
        traced = sum(e.comparisons_delta for e in report.iterations)
        assert traced + report.base_comparisons == report.total_comparisons
        assert check_comparison_accounting(report)

    def test_accounting_mismatch(self, shuffled):
        report = run_selection(parse_algorithm('classic5'), shuffled(500, seed=4), 77)
        report.total_comparisons += 1
        assert not check_comparison_accounting(report)

    def test_rank_conservation(self, shuffled):
        report = run_selection(parse_algorithm('classic5'), shuffled(5_000, seed=5), 3_210)
        assert check_rank_conservation(report.iterations, 3_210)
        assert not check_rank_conservation(report.iterations, 3_211)

    def test_consecutive_events(self, shuffled):
        report = run_selection(parse_algorithm('classic5'), shuffled(5_000, seed=6), 42)
        for previous, current in zip(report.iterations, report.iterations[1:]):
            check_consecutive(previous, current)

    def test_non_consecutive_events(self):
        first = event(CLASSIC_5, 100, 10, 40)
        with pytest.raises(TraceStructureError):
            check_consecutive(first, event(CLASSIC_5, 39, 10, 20, index=2))
        with pytest.raises(TraceStructureError):
            check_consecutive(first, event(CLASSIC_5, 41, 10, 20, index=1))

    def test_trace_rows(self, shuffled):
        report = run_selection(parse_algorithm('shifting4'), shuffled(300, seed=7), 200)
        row = report.trace_rows()[0]
        assert row['n'] == 300
        assert row['policy'] == 'upper'
        assert row['a1'] + row['a2'] + 1 == 300


class TestShiftingTargetDrift:
    def test_single_iteration_passes(self):
        assert check_shifting_target_drift([event(SHIFTING_TARGET_4, 9, 4, 3,
                                                  MedianPolicy.LOWER)])

    @pytest.mark.parametrize('i', [1, 4_000, 5_000, 5_001, 9_999])
    def test_live_runs(self, shuffled, i):
        report = run_selection(SHIFTING_TARGET_4, shuffled(10_000, seed=8), i)
        result = check_shifting_target_drift(report.iterations)
        assert result, result.explanation

    def test_drift_too_large(self):
        first = event(SHIFTING_TARGET_4, 100, 49, 14, MedianPolicy.LOWER)
        second = event(SHIFTING_TARGET_4, 85, 34, 33, MedianPolicy.LOWER, index=1)
        assert Fraction(second.i, second.n) == Fraction(2, 5)
        result = check_shifting_target_drift([first, second])
        assert not result
        assert 'drift' in result.explanation

    def test_wrong_policy(self):
        wrong = event(SHIFTING_TARGET_4, 100, 20, 19, MedianPolicy.UPPER)
        assert not check_shifting_target_drift([wrong])

    def test_outer_quartile_near_discard(self):
        # i = 10 of 100, lower policy, pivot at rank 5: the near end was discarded
        near = event(SHIFTING_TARGET_4, 100, 10, 4, MedianPolicy.LOWER)
        assert not check_shifting_target_drift([near])

    def test_wrong_algorithm(self):
        with pytest.raises(TraceStructureError):
            check_shifting_target_drift([event(CLASSIC_5, 10, 1, 3)])

    def test_thresholds_tend_to_limits(self):
        rho1 = first_drift_threshold(100_000, MedianPolicy.LOWER, 25_000)
        assert rho1 == Fraction(1, 3)
        rho2 = second_drift_threshold(rho1, 75_000, 18_750)
        assert abs(float(rho2) - 1 / 9) < 1e-4


class TestComparisonsPerElement:
    def test_singleton(self):
        report = run_selection(parse_algorithm('classic5'), make_sequence([3]), 1)
        assert comparisons_per_element(report) == 0

    def test_oracle_on_eight(self, shuffled):
        report = run_selection(SORTING_ORACLE, shuffled(8, seed=1), 4)
        assert comparisons_per_element(report) <= 3

    def test_exact_fraction(self):
        report = RunReport(algorithm=CLASSIC_5, n=6, i=1, result=make_sequence([1])[0],
                           total_comparisons=9, max_depth=0)
        assert comparisons_per_element(report) == Fraction(3, 2)
