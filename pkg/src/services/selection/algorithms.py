"""
Selection Algorithms
Median-of-medians SELECT and its small-group variants, plus the two baselines

All deterministic variants share one outer loop:
1. If n is at most the base-case size, sort and return the i-th element.
2. Find a pivot m (variant specific, via a recursive median call that records no trace).
3. Partition into A1 = {x < m} and A2 = {x > m} (order preserved).
   If |A1| = i-1 return m; if |A1| > i-1 continue on A1; else continue on A2 with
   i ← i - |A1| - 1.

Variants:
- ClassicSelect(g, policy): one grouping pass of size g (g = 5 is the reference algorithm)
- RepeatedStepSelect(g): two grouping passes of size g before the recursive median call
- ShiftingTargetSelect: groups of 4, lower medians when i ≤ n/2, upper medians otherwise
- HybridSelect: two passes of size 4, lower medians first, upper medians second
"""
import logging
import time
from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Tuple

import numpy as np

from src.models.algorithm import (
    AlgorithmId,
    AlgorithmKind,
    HYBRID_4,
    REPEATED_STEP_3,
    REPEATED_STEP_4,
    SHIFTING_TARGET_4,
    SORTING_ORACLE,
    SelectionRequest,
)
from src.models.element import Element, ElementSequence, MedianPolicy
from src.models.trace import RunReport
from src.services.selection.instrumentation import TraceRecorder
from src.services.selection.primitives import (
    ComparisonCounter,
    medians_of_groups,
    stable_partition,
)
from src.utils.errors import EmptyInputError, InputFormatError, RankOutOfBoundsError

logger = logging.getLogger(__name__)


@dataclass
class SelectionContext:
    """Per-run mutable state: counter, optional trace, depth statistics"""
    counter: ComparisonCounter
    recorder: Optional[TraceRecorder] = None
    max_depth: int = 0
    base_comparisons: int = 0


def validate_request(request: SelectionRequest):
    """
    Raises:
        EmptyInputError: empty sequence
        RankOutOfBoundsError: i outside 1..n
    """
    if not request.sequence:
        raise EmptyInputError()
    if not 1 <= request.i <= request.n:
        raise RankOutOfBoundsError(request.i, request.n)


def pivot_target(size: int) -> int:
    """Rank of the lower median of a sequence of the given size"""
    return (size + 1) // 2


class SelectionAlgorithm(ABC):
    """
    Base class of all selection algorithms

    Attributes:
        recurrence: Worst-case recurrence coefficients T(n) ≤ Σ T(c·n) + O(n)
    """

    recurrence: Tuple[Fraction, ...] = ()

    def __init__(self, algorithm_id: AlgorithmId):
        self.algorithm_id = algorithm_id

    @property
    def name(self) -> str:
        return self.algorithm_id.name

    @property
    def coefficient_sum(self) -> Optional[Fraction]:
        """Sum of recurrence coefficients; below 1 means a linear worst case"""
        return sum(self.recurrence, Fraction(0)) if self.recurrence else None

    def select(self, request: SelectionRequest, counter: ComparisonCounter,
               recorder: Optional[TraceRecorder] = None) -> Element:
        """
        Return the element of rank request.i

        Args:
            request: Sequence and 1-indexed target rank
            counter: Comparison counter
            recorder: Trace recorder for the outer recursion (optional)

        Returns:
            The i-th smallest element
        """
        return self.run(request, SelectionContext(counter, recorder))

    @abstractmethod
    def run(self, request: SelectionRequest, context: SelectionContext) -> Element:
        """Select with an explicit context"""


class PartitioningSelect(SelectionAlgorithm):
    """
    Pivot-and-partition outer loop shared by the median-of-medians variants and quickselect

    Attributes:
        base_case_size: Inputs of at most this size are sorted directly
    """

    base_case_size = 1

    def run(self, request: SelectionRequest, context: SelectionContext) -> Element:
        validate_request(request)
        return self._select(list(request.sequence), request.i, context, depth=0, outer=True)

    def _select(self, elements: ElementSequence, i: int, context: SelectionContext,
                depth: int, outer: bool) -> Element:
        counter = context.counter
        context.max_depth = max(context.max_depth, depth)

        while True:
            n = len(elements)
            if n <= self.base_case_size:
                before = counter.count
                result = counter.sorted(elements)[i - 1]
                if outer:
                    context.base_comparisons += counter.count - before
                return result

            before = counter.count
            policy = self.choose_policy(n, i)
            pivot = self.find_pivot(elements, policy, context, depth)
            below, above = stable_partition(elements, pivot, counter)

            if outer and context.recorder is not None:
                context.recorder.record(
                    n=n,
                    i=i,
                    policy=policy,
                    size_a1=len(below),
                    size_a2=len(above),
                    comparisons_delta=counter.count - before,
                )

            if len(below) == i - 1:
                return pivot
            if len(below) > i - 1:
                elements = below
            else:
                i -= len(below) + 1
                elements = above

    def recursive_median(self, medians: ElementSequence, context: SelectionContext,
                         depth: int) -> Element:
        """Select the lower median of a median sequence with this same algorithm"""
        return self._select(medians, pivot_target(len(medians)), context, depth + 1, outer=False)

    def choose_policy(self, n: int, i: int) -> Optional[MedianPolicy]:
        """Median policy of the iteration, as recorded in the trace"""
        return None

    @abstractmethod
    def find_pivot(self, elements: ElementSequence, policy: Optional[MedianPolicy],
                   context: SelectionContext, depth: int) -> Element:
        """Pivot of one iteration"""


class ClassicSelect(PartitioningSelect):
    """Median-of-medians with one grouping pass of size g"""

    def __init__(self, group_size: int = 5, policy: MedianPolicy = MedianPolicy.LOWER):
        super().__init__(AlgorithmId.classic(group_size, policy))
        self.group_size = group_size
        self.policy = policy
        self.base_case_size = group_size
        self.recurrence = _classic_recurrence(group_size)

    def choose_policy(self, n, i):
        return self.policy

    def find_pivot(self, elements, policy, context, depth):
        medians = medians_of_groups(elements, self.group_size, policy, context.counter)
        return self.recursive_median(medians, context, depth)


class RepeatedStepSelect(PartitioningSelect):
    """
    Two grouping passes of size g under one fixed policy, then the recursive median

    Inputs too small for two meaningful passes (n < g²) are sorted directly.
    """

    def __init__(self, group_size: int, algorithm_id: AlgorithmId,
                 recurrence: Tuple[Fraction, ...]):
        super().__init__(algorithm_id)
        self.group_size = group_size
        self.policy = MedianPolicy.LOWER
        self.base_case_size = group_size * group_size - 1
        self.recurrence = recurrence

    def choose_policy(self, n, i):
        return self.policy

    def find_pivot(self, elements, policy, context, depth):
        counter = context.counter
        medians = medians_of_groups(elements, self.group_size, policy, counter)
        medians = medians_of_groups(medians, self.group_size, policy, counter)
        return self.recursive_median(medians, context, depth)


class ShiftingTargetSelect(PartitioningSelect):
    """Groups of 4; lower medians when i ≤ n/2, upper medians otherwise"""

    base_case_size = 4
    # Outer-quartile case; the middle regime resolves within three iterations
    recurrence = (Fraction(1, 4), Fraction(5, 8))
    two_iteration_recurrence = (Fraction(1, 4), Fraction(3, 16), Fraction(15, 32))
    three_iteration_recurrence = (Fraction(1, 4), Fraction(3, 16), Fraction(9, 64),
                                  Fraction(45, 128))

    def __init__(self):
        super().__init__(SHIFTING_TARGET_4)

    def choose_policy(self, n, i):
        return MedianPolicy.LOWER if 2 * i <= n else MedianPolicy.UPPER

    def find_pivot(self, elements, policy, context, depth):
        medians = medians_of_groups(elements, 4, policy, context.counter)
        return self.recursive_median(medians, context, depth)


class HybridSelect(PartitioningSelect):
    """Two passes of size 4: lower medians of A, then upper medians of those"""

    base_case_size = 15
    recurrence = (Fraction(1, 16), Fraction(13, 16))

    def __init__(self):
        super().__init__(HYBRID_4)

    def find_pivot(self, elements, policy, context, depth):
        counter = context.counter
        medians = medians_of_groups(elements, 4, MedianPolicy.LOWER, counter)
        medians = medians_of_groups(medians, 4, MedianPolicy.UPPER, counter)
        return self.recursive_median(medians, context, depth)


class SortingOracleSelect(SelectionAlgorithm):
    """Ground truth: sort a copy by (key, origin_index) and index it"""

    def __init__(self):
        super().__init__(SORTING_ORACLE)

    def run(self, request, context):
        validate_request(request)
        before = context.counter.count
        result = context.counter.sorted(request.sequence)[request.i - 1]
        context.base_comparisons += context.counter.count - before
        return result


class RandomizedQuickselect(PartitioningSelect):
    """
    Quickselect with uniformly drawn pivots

    Pivot indices come from numpy's PCG64 generator seeded with the algorithm seed,
    so runs are reproducible.
    """

    def __init__(self, seed: int = 0):
        super().__init__(AlgorithmId.quickselect(seed))
        self.seed = seed
        self._rng = None

    def run(self, request, context):
        self._rng = np.random.Generator(np.random.PCG64(self.seed))
        return super().run(request, context)

    def find_pivot(self, elements, policy, context, depth):
        return elements[int(self._rng.integers(0, len(elements)))]


def _classic_recurrence(group_size: int) -> Tuple[Fraction, ...]:
    """
    T(n) ≤ T(n/g) + T(c·n) with c the worst-case kept fraction

    One median in two sits on each side, each with (g+1)/2 members guaranteed
    (g odd), or g/2 on the weaker side (g even).
    """
    discarded_per_group = (group_size + 1) // 2 if group_size % 2 else group_size // 2
    return (Fraction(1, group_size), 1 - Fraction(discarded_per_group, 2 * group_size))


ALGORITHM_NAMES = [
    'oracle', 'quickselect', 'classic3', 'classic3u', 'classic4', 'classic4u', 'classic5',
    'repeated3', 'repeated4', 'shifting4', 'hybrid4',
]

# Algorithms checked against the oracle by verification
VERIFIED_ALGORITHMS = [
    'classic3', 'classic4', 'classic4u', 'classic5', 'repeated3', 'repeated4', 'shifting4',
    'hybrid4', 'quickselect',
]

# Variants with linear worst-case recurrences
LINEAR_ALGORITHMS = ['repeated3', 'repeated4', 'shifting4', 'hybrid4', 'classic5']

# Growth probe: original SELECT with small groups, plus linear controls
PROBE_ALGORITHMS = ['classic3', 'classic3u', 'classic4', 'classic4u', 'repeated3', 'classic5']


def parse_algorithm(name: str, seed: int = 0) -> AlgorithmId:
    """
    Resolve a short algorithm name

    Args:
        name: One of ALGORITHM_NAMES
        seed: Pivot seed for quickselect

    Returns:
        AlgorithmId
    """
    name = name.strip().lower()
    fixed: Dict[str, AlgorithmId] = {
        'oracle': SORTING_ORACLE,
        'repeated3': REPEATED_STEP_3,
        'repeated4': REPEATED_STEP_4,
        'shifting4': SHIFTING_TARGET_4,
        'hybrid4': HYBRID_4,
    }
    if name in fixed:
        return fixed[name]
    if name == 'quickselect':
        return AlgorithmId.quickselect(seed)
    if name.startswith('classic') and name[7:8] in ('3', '4', '5') and name[8:] in ('', 'u'):
        policy = MedianPolicy.UPPER if name.endswith('u') else MedianPolicy.LOWER
        return AlgorithmId.classic(int(name[7]), policy)
    raise InputFormatError(f"unknown algorithm '{name}'", details={'known': ALGORITHM_NAMES})


def get_algorithm(algorithm_id: AlgorithmId) -> SelectionAlgorithm:
    """Instantiate the algorithm named by an AlgorithmId"""
    kind = algorithm_id.kind
    if kind is AlgorithmKind.CLASSIC:
        return ClassicSelect(algorithm_id.group_size, algorithm_id.policy or MedianPolicy.LOWER)
    if kind is AlgorithmKind.REPEATED_STEP_3:
        return RepeatedStepSelect(3, REPEATED_STEP_3, (Fraction(1, 9), Fraction(7, 9)))
    if kind is AlgorithmKind.REPEATED_STEP_4:
        return RepeatedStepSelect(4, REPEATED_STEP_4, (Fraction(1, 16), Fraction(7, 8)))
    if kind is AlgorithmKind.SHIFTING_TARGET_4:
        return ShiftingTargetSelect()
    if kind is AlgorithmKind.HYBRID_4:
        return HybridSelect()
    if kind is AlgorithmKind.SORTING_ORACLE:
        return SortingOracleSelect()
    return RandomizedQuickselect(algorithm_id.seed or 0)


def classic_select(request: SelectionRequest, group_size: int, policy: MedianPolicy,
                   counter: ComparisonCounter, trace: Optional[TraceRecorder] = None) -> Element:
    """Classic median-of-medians SELECT with groups of 3, 4 or 5"""
    return ClassicSelect(group_size, policy).select(request, counter, trace)


def repeated_step_select_3(request: SelectionRequest, counter: ComparisonCounter,
                           trace: Optional[TraceRecorder] = None) -> Element:
    """Repeated step SELECT with two passes of groups of 3"""
    return get_algorithm(REPEATED_STEP_3).select(request, counter, trace)


def repeated_step_select_4(request: SelectionRequest, counter: ComparisonCounter,
                           trace: Optional[TraceRecorder] = None) -> Element:
    """Repeated step SELECT with two lower-median passes of groups of 4"""
    return get_algorithm(REPEATED_STEP_4).select(request, counter, trace)


def shifting_target_select_4(request: SelectionRequest, counter: ComparisonCounter,
                             trace: Optional[TraceRecorder] = None) -> Element:
    """Shifting target SELECT with groups of 4"""
    return ShiftingTargetSelect().select(request, counter, trace)


def hybrid_select_4(request: SelectionRequest, counter: ComparisonCounter,
                    trace: Optional[TraceRecorder] = None) -> Element:
    """Two passes of groups of 4, lower then upper medians"""
    return HybridSelect().select(request, counter, trace)


def sorting_oracle_select(request: SelectionRequest,
                          counter: Optional[ComparisonCounter] = None) -> Element:
    """Sort by (key, origin_index) and return position i"""
    return SortingOracleSelect().select(request, counter or ComparisonCounter())


def randomized_quickselect(request: SelectionRequest, seed: int = 0,
                           counter: Optional[ComparisonCounter] = None,
                           trace: Optional[TraceRecorder] = None) -> Element:
    """Quickselect with seeded uniform pivots"""
    return RandomizedQuickselect(seed).select(request, counter or ComparisonCounter(), trace)


def run_selection(algorithm_id: AlgorithmId, sequence: ElementSequence, i: int,
                  counter: Optional[ComparisonCounter] = None) -> RunReport:
    """
    Run one selection with full instrumentation

    Args:
        algorithm_id: Algorithm to run
        sequence: Input sequence
        i: 1-indexed target rank
        counter: Comparison counter (a fresh one when omitted)

    Returns:
        RunReport with the trace of the outer recursion
    """
    algorithm = get_algorithm(algorithm_id)
    counter = counter or ComparisonCounter()
    start_count = counter.count
    context = SelectionContext(counter, TraceRecorder(algorithm_id))

    started = time.perf_counter()
    result = algorithm.run(SelectionRequest(sequence, i), context)
    wall_time = time.perf_counter() - started

    return RunReport(
        algorithm=algorithm_id,
        n=len(sequence),
        i=i,
        result=result,
        total_comparisons=counter.count - start_count,
        max_depth=context.max_depth,
        base_comparisons=context.base_comparisons,
        iterations=context.recorder.events,
        wall_time=wall_time,
    )
