"""
Selection Instrumentation
Trace capture and the discard / rank-drift guarantees as executable predicates

Discard bounds are floor-exact: the counting arguments are re-run with integer
floors instead of rounding the real-valued fractions, so they hold for every n.
A bound counts elements provably ≤ m (f) or ≥ m (g), m included. An iteration
passes when |A1| + 1 ≥ f(n) and |A2| + 1 ≥ g(n).

For a grouping pass of size g under policy p, a full group contributes
low = p.rank(g) members ≤ its median and high = g - low + 1 members ≥ it; the
short remainder group (size r) falls short by low(g) - low(r) and high(g) - high(r).
With k medians at the top level, at least ceil(k/2) of them lie on each side of m
(m is their lower median), so

    one pass:   f(n) = ceil(low·k/2) - dlow
    two passes: f(n) = ceil(low1·low2·k/2) - low1·dlow2 - dlow1

and symmetrically for g(n). These reduce to 3n/10 (groups of 5), 2n/9 (two passes
of 3) and 3n/16 (lower-then-upper passes of 4) when the divisions are exact.
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

from src.models.algorithm import AlgorithmId, AlgorithmKind
from src.models.element import MedianPolicy
from src.models.trace import RunReport, TraceEvent
from src.utils.errors import BoundNotRegisteredError, TraceStructureError

logger = logging.getLogger(__name__)

# (group size, policy) of each grouping pass, outermost first
Pass = Tuple[int, MedianPolicy]


class TraceRecorder:
    """Collects the TraceEvents of one run's outer recursion"""

    def __init__(self, algorithm: AlgorithmId):
        self.algorithm = algorithm
        self.events: List[TraceEvent] = []

    def record(self, n: int, i: int, policy: Optional[MedianPolicy], size_a1: int,
               size_a2: int, comparisons_delta: int) -> TraceEvent:
        event = TraceEvent(
            iteration_index=len(self.events),
            n=n,
            i=i,
            algorithm=self.algorithm,
            policy_used=policy,
            pivot_rank=size_a1 + 1,
            size_a1=size_a1,
            size_a2=size_a2,
            comparisons_delta=comparisons_delta,
        )
        logger.debug(f"{self.algorithm.name} iter={event.iteration_index} n={n} i={i} "
                     f"a1={size_a1} a2={size_a2} cmp={comparisons_delta}")
        self.events.append(event)
        return event


@dataclass
class CheckResult:
    """Outcome of one instrumentation check"""
    passed: bool
    explanation: str = ''

    def __bool__(self):
        return self.passed


@dataclass(frozen=True)
class DiscardBound:
    """Floor-exact per-side guarantees of one algorithm (under one policy)"""
    algorithm: AlgorithmId
    lower_side_bound: Callable[[int], int]
    upper_side_bound: Callable[[int], int]


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def _side_bound(n: int, passes: Sequence[Pass], upper: bool) -> int:
    """
    Elements provably on one side of the pivot, pivot included

    Args:
        n: Iteration size
        passes: Grouping passes, outermost (applied to A) first
        upper: Count elements ≥ m instead of ≤ m

    Returns:
        Floor-exact count, never negative
    """
    sizes = [n]
    for group_size, _ in passes:
        sizes.append(_ceil_div(sizes[-1], group_size))
    top = sizes[-1]

    def members(policy: MedianPolicy, size: int) -> int:
        return policy.members_at_least(size) if upper else policy.members_at_most(size)

    product = 1
    for group_size, policy in passes:
        product *= members(policy, group_size)
    total = _ceil_div(product * top, 2)

    # The remainder group of pass j removes its deficit times the multiplicity of
    # the passes below it (closer to A)
    multiplicity = 1
    for level, (group_size, policy) in enumerate(passes):
        remainder = sizes[level] % group_size
        if remainder:
            total -= multiplicity * (members(policy, group_size) - members(policy, remainder))
        multiplicity *= members(policy, group_size)
    return max(0, total)


def _passes_for(algorithm: AlgorithmId, policy: Optional[MedianPolicy]) -> List[Pass]:
    kind = algorithm.kind
    if kind is AlgorithmKind.CLASSIC:
        return [(algorithm.group_size, algorithm.policy or MedianPolicy.LOWER)]
    if kind is AlgorithmKind.REPEATED_STEP_3:
        return [(3, MedianPolicy.LOWER), (3, MedianPolicy.LOWER)]
    if kind is AlgorithmKind.REPEATED_STEP_4:
        return [(4, MedianPolicy.LOWER), (4, MedianPolicy.LOWER)]
    if kind is AlgorithmKind.HYBRID_4:
        return [(4, MedianPolicy.LOWER), (4, MedianPolicy.UPPER)]
    if kind is AlgorithmKind.SHIFTING_TARGET_4 and policy is not None:
        return [(4, policy)]
    raise BoundNotRegisteredError(algorithm)


def has_bound(algorithm: AlgorithmId) -> bool:
    return algorithm.kind not in (AlgorithmKind.SORTING_ORACLE,
                                  AlgorithmKind.RANDOMIZED_QUICKSELECT)


def discard_bound(algorithm: AlgorithmId, policy: Optional[MedianPolicy] = None) -> DiscardBound:
    """
    Registered floor-exact bound of an algorithm

    Args:
        algorithm: Algorithm identifier
        policy: Policy in force (shifting target only; its bounds depend on it)

    Returns:
        DiscardBound

    Raises:
        BoundNotRegisteredError: baselines, or shifting target without a policy
    """
    passes = _passes_for(algorithm, policy)
    return DiscardBound(
        algorithm=algorithm,
        lower_side_bound=lambda n: _side_bound(n, passes, upper=False),
        upper_side_bound=lambda n: _side_bound(n, passes, upper=True),
    )


def check_event_structure(event: TraceEvent) -> CheckResult:
    """size_A1 + size_A2 + 1 = n and pivot_rank = size_A1 + 1"""
    if event.size_a1 + event.size_a2 + 1 != event.n:
        return CheckResult(False, f"structure: a1={event.size_a1} + a2={event.size_a2} + 1 "
                                  f"!= n={event.n}")
    if event.pivot_rank != event.size_a1 + 1:
        return CheckResult(False, f"structure: pivot_rank={event.pivot_rank} != a1 + 1")
    return CheckResult(True)


def check_two_sided_bound(event: TraceEvent, bound: Optional[DiscardBound] = None) -> CheckResult:
    """
    Check one iteration against its algorithm's discard bound

    Args:
        event: Trace event
        bound: Bound to apply; resolved from the event's algorithm and policy when omitted

    Returns:
        CheckResult with an explanation on failure
    """
    structure = check_event_structure(event)
    if not structure:
        return structure

    if bound is None:
        bound = discard_bound(event.algorithm, event.policy_used)
    elif bound.algorithm != event.algorithm:
        raise TraceStructureError(f"event from {event.algorithm} checked against a "
                                  f"{bound.algorithm} bound")

    f, g = bound.lower_side_bound(event.n), bound.upper_side_bound(event.n)
    at_most, at_least = event.size_a1 + 1, event.size_a2 + 1
    if at_most < f or at_least < g:
        return CheckResult(False,
                           f"{event.algorithm.name} iter={event.iteration_index} n={event.n}: "
                           f"elements ≤ m = {at_most} (need {f}), "
                           f"elements ≥ m = {at_least} (need {g})")
    return CheckResult(True, f"≤m {at_most} ≥ {f}, ≥m {at_least} ≥ {g}")


def check_consecutive(previous: TraceEvent, current: TraceEvent) -> None:
    """
    Raises:
        TraceStructureError: current does not continue previous
    """
    if previous.algorithm != current.algorithm:
        raise TraceStructureError("events come from different algorithms")
    if current.iteration_index != previous.iteration_index + 1:
        raise TraceStructureError(f"iteration {current.iteration_index} does not follow "
                                  f"{previous.iteration_index}")
    if previous.found:
        raise TraceStructureError("iteration follows a returned pivot")
    if previous.went_left:
        expected_n, expected_i = previous.size_a1, previous.i
    else:
        expected_n, expected_i = previous.size_a2, previous.i - previous.size_a1 - 1
    if (current.n, current.i) != (expected_n, expected_i):
        raise TraceStructureError(f"iteration {current.iteration_index} has (n, i) = "
                                  f"({current.n}, {current.i}), expected "
                                  f"({expected_n}, {expected_i})")


def _distance(event: TraceEvent) -> int:
    """Target distance from the end the policy discards: i (lower) or n - i + 1 (upper)"""
    if event.policy_used is MedianPolicy.UPPER:
        return event.n - event.i + 1
    return event.i


def _discards_near_end(event: TraceEvent) -> bool:
    """Iteration discarded only the end nearest to the target"""
    if event.policy_used is MedianPolicy.UPPER:
        return event.went_left
    return event.went_right


def _near_side_bound(event: TraceEvent) -> int:
    bound = discard_bound(event.algorithm, event.policy_used)
    if event.policy_used is MedianPolicy.UPPER:
        return bound.upper_side_bound(event.n)
    return bound.lower_side_bound(event.n)


def _far_side_bound(event: TraceEvent) -> int:
    bound = discard_bound(event.algorithm, event.policy_used)
    if event.policy_used is MedianPolicy.UPPER:
        return bound.lower_side_bound(event.n)
    return bound.upper_side_bound(event.n)


def first_drift_threshold(n: int, policy: MedianPolicy, near_bound: int) -> Fraction:
    """
    Floor-exact bound on d'/n' after a near-end discard from the middle regime

    (d_max - T) / (n - T), with d_max = floor(n/2) (lower) or ceil(n/2) (upper) and
    T the near-side bound; tends to 1/3. The slack over 1/3 is max(0, this - 1/3).
    """
    d_max = n // 2 if policy is MedianPolicy.LOWER else n - n // 2
    return max(Fraction(1, 3), Fraction(d_max - near_bound, n - near_bound))


def second_drift_threshold(rho1: Fraction, n_next: int, near_bound_next: int) -> Fraction:
    """
    Floor-exact bound on d''/n'' after a second near-end discard

    (floor(rho1·n') - T') / (n' - T'); tends to 1/9. The slack over 1/9 is
    max(0, this - 1/9).
    """
    d_next = math.floor(rho1 * n_next)
    return max(Fraction(1, 9),
               Fraction(max(0, d_next - near_bound_next), n_next - near_bound_next))


def check_shifting_target_drift(events: Sequence[TraceEvent]) -> CheckResult:
    """
    Check policy choice, outer-quartile discards and the rank drift of one run

    - policy is lower iff 2i ≤ n
    - with d the distance from the discarded end and 4d ≤ n, the iteration returns m or
      discards the far side, and that discard meets the far-side bound
    - after a near-end discard from the middle regime (n/4 < d), the successor has
      d'/n' ≤ first_drift_threshold; if the successor again discards its near end under
      the same policy, its successor has d''/n'' ≤ second_drift_threshold

    Raises:
        TraceStructureError: events not from the shifting target algorithm, or not consecutive
    """
    for event in events:
        if event.algorithm.kind is not AlgorithmKind.SHIFTING_TARGET_4:
            raise TraceStructureError(f"drift check needs shifting target events, "
                                      f"got {event.algorithm}")
    for previous, current in zip(events, events[1:]):
        check_consecutive(previous, current)

    for index, event in enumerate(events):
        expected = MedianPolicy.LOWER if 2 * event.i <= event.n else MedianPolicy.UPPER
        if event.policy_used is not expected:
            return CheckResult(False, f"iter={index}: policy {event.policy_used} with "
                                      f"i={event.i}, n={event.n}")

        d = _distance(event)
        if 4 * d <= event.n:
            if event.found:
                continue
            if _discards_near_end(event):
                return CheckResult(False, f"iter={index}: outer-quartile target "
                                          f"(d={d}, n={event.n}) but the near end was discarded")
            far_discard = event.size_a2 + 1 if event.went_left else event.size_a1 + 1
            if far_discard < _far_side_bound(event):
                return CheckResult(False, f"iter={index}: far-side discard {far_discard} "
                                          f"< {_far_side_bound(event)}")
            continue

        if not _discards_near_end(event) or index + 1 >= len(events):
            continue

        successor = events[index + 1]
        rho1 = first_drift_threshold(event.n, event.policy_used, _near_side_bound(event))
        d1 = Fraction(_distance_in_policy(successor, event.policy_used), successor.n)
        if d1 > rho1:
            return CheckResult(False, f"iter={index + 1}: drift {float(d1):.4f} > "
                                      f"{float(rho1):.4f} after a near-end discard")

        if (successor.policy_used is event.policy_used and _discards_near_end(successor)
                and index + 2 < len(events)):
            follower = events[index + 2]
            rho2 = second_drift_threshold(rho1, successor.n, _near_side_bound(successor))
            d2 = Fraction(_distance_in_policy(follower, event.policy_used), follower.n)
            if d2 > rho2:
                return CheckResult(False, f"iter={index + 2}: drift {float(d2):.4f} > "
                                          f"{float(rho2):.4f} after two near-end discards")

    return CheckResult(True)


def _distance_in_policy(event: TraceEvent, policy: MedianPolicy) -> int:
    """Distance measured from the end a given policy discards"""
    return event.n - event.i + 1 if policy is MedianPolicy.UPPER else event.i


def check_rank_conservation(events: Sequence[TraceEvent], original_i: int) -> CheckResult:
    """Discarded-below count plus the current i equals the original i at every iteration"""
    below = 0
    for event in events:
        if below + event.i != original_i:
            return CheckResult(False, f"iter={event.iteration_index}: discarded below {below} "
                                      f"+ i={event.i} != {original_i}")
        if event.went_right:
            below += event.size_a1 + 1
    return CheckResult(True)


def check_comparison_accounting(report: RunReport,
                                final_count: Optional[int] = None) -> CheckResult:
    """Sum of comparisons_delta plus base-case comparisons equals the run total"""
    traced = sum(event.comparisons_delta for event in report.iterations)
    if traced + report.base_comparisons != report.total_comparisons:
        return CheckResult(False, f"traced {traced} + base {report.base_comparisons} "
                                  f"!= total {report.total_comparisons}")
    if final_count is not None and final_count != report.total_comparisons:
        return CheckResult(False, f"counter {final_count} != total {report.total_comparisons}")
    return CheckResult(True)


def check_run(report: RunReport) -> CheckResult:
    """
    All instrumentation checks applicable to one run

    Returns:
        The first failing CheckResult, or a passing one
    """
    checks = [check_comparison_accounting(report),
              check_rank_conservation(report.iterations, report.i)]
    for event in report.iterations:
        checks.append(check_event_structure(event))
        if has_bound(report.algorithm):
            checks.append(check_two_sided_bound(event))
    for previous, current in zip(report.iterations, report.iterations[1:]):
        try:
            check_consecutive(previous, current)
        except TraceStructureError as e:
            checks.append(CheckResult(False, e.message))
    if report.algorithm.kind is AlgorithmKind.SHIFTING_TARGET_4:
        checks.append(check_shifting_target_drift(report.iterations))

    for result in checks:
        if not result:
            logger.error(f"Instrumentation failure on {report.algorithm.name} "
                         f"(n={report.n}, i={report.i}): {result.explanation}")
            return result
    return CheckResult(True)


def comparisons_per_element(report: RunReport) -> Fraction:
    """total_comparisons / original n"""
    return Fraction(report.total_comparisons, report.n)
