"""
Selection Primitives
Group formation, small-group median networks and stable two-way partition

Every key ordering decision goes through a ComparisonCounter, so comparison budgets
are observable on live runs:
- median of 3: at most 3 comparisons
- lower/upper median of 4: at most 4 comparisons
- median of 5: at most 6 comparisons
"""
import functools
import logging
from typing import List, Tuple

from src.models.element import Element, ElementSequence, MedianPolicy
from src.utils.errors import EmptyInputError, GroupTooLargeError, PivotNotFoundError

logger = logging.getLogger(__name__)

MAX_NETWORK_GROUP = 5


class ComparisonCounter:
    """
    Counts key comparisons

    Elements compare by (key, origin_index), so distinct elements never tie.
    """

    def __init__(self):
        self.count = 0

    def less(self, a: Element, b: Element) -> bool:
        """Return a < b, counting one comparison"""
        self.count += 1
        return a < b

    def compare(self, a: Element, b: Element) -> int:
        """Three-way form of less() for sorting, counting one comparison"""
        return -1 if self.less(a, b) else 1

    def sorted(self, elements: ElementSequence) -> ElementSequence:
        """Comparison sort of a copy, every comparison counted"""
        return sorted(elements, key=functools.cmp_to_key(self.compare))


class MutantComparisonCounter(ComparisonCounter):
    """
    Counter that inverts exactly one comparison of a run

    Used to check that verification catches a single faulty comparison.
    """

    def __init__(self, flip_at: int = 0):
        super().__init__()
        self.flip_at = flip_at

    def less(self, a: Element, b: Element) -> bool:
        result = super().less(a, b)
        if self.count - 1 == self.flip_at:
            return not result
        return result


def form_groups(s: ElementSequence, g: int) -> List[ElementSequence]:
    """
    Split a sequence into consecutive groups of size g

    The last group keeps its natural short size n mod g when g does not divide n.

    Args:
        s: Nonempty sequence
        g: Group size (at least 2)

    Returns:
        List of consecutive slices whose concatenation equals s
    """
    if not s:
        raise EmptyInputError()
    if g < 2:
        raise ValueError(f"group size must be at least 2, got {g}")
    return [s[start:start + g] for start in range(0, len(s), g)]


def _ordered_pair(a: Element, b: Element, counter: ComparisonCounter) -> Tuple[Element, Element]:
    return (a, b) if counter.less(a, b) else (b, a)


def _second_smallest(p: Tuple[Element, Element], q: Tuple[Element, Element],
                     counter: ComparisonCounter) -> Element:
    """Second smallest of four elements given as two ordered pairs, in 2 comparisons"""
    if counter.less(p[0], q[0]):
        # p[0] is the minimum; the runner-up is q's low or p's high
        return p[1] if counter.less(p[1], q[0]) else q[0]
    return q[1] if counter.less(q[1], p[0]) else p[0]


def _second_largest(p: Tuple[Element, Element], q: Tuple[Element, Element],
                    counter: ComparisonCounter) -> Element:
    """Second largest of four elements given as two ordered pairs, in 2 comparisons"""
    if counter.less(p[1], q[1]):
        return q[0] if counter.less(p[1], q[0]) else p[1]
    return p[0] if counter.less(q[1], p[0]) else q[1]


def _median_of_three(a: Element, b: Element, c: Element, counter: ComparisonCounter) -> Element:
    if counter.less(a, b):
        if counter.less(b, c):
            return b
        return c if counter.less(a, c) else a
    if counter.less(a, c):
        return a
    return c if counter.less(b, c) else b


def _median_of_five(group: ElementSequence, counter: ComparisonCounter) -> Element:
    a, b, c, d, e = group
    p = _ordered_pair(a, b, counter)
    q = _ordered_pair(c, d, counter)
    # The smaller of the two lows lies below three others: rank ≤ 2, never the median.
    # The median of five is then the second smallest of the remaining four.
    if counter.less(p[0], q[0]):
        p = _ordered_pair(p[1], e, counter)
    else:
        q = _ordered_pair(q[1], e, counter)
    return _second_smallest(p, q, counter)


def group_median(group: ElementSequence, policy: MedianPolicy,
                 counter: ComparisonCounter) -> Element:
    """
    Median of a group of 1..5 elements under a median policy

    Args:
        group: Group of 1 to 5 elements
        policy: Lower or upper median for even sizes
        counter: Comparison counter

    Returns:
        The element of rank policy.rank(len(group))
    """
    size = len(group)
    if size > MAX_NETWORK_GROUP:
        raise GroupTooLargeError(size)
    if size == 0:
        raise EmptyInputError()

    if size == 1:
        return group[0]
    if size == 2:
        low, high = _ordered_pair(group[0], group[1], counter)
        return low if policy is MedianPolicy.LOWER else high
    if size == 3:
        return _median_of_three(group[0], group[1], group[2], counter)
    if size == 4:
        p = _ordered_pair(group[0], group[1], counter)
        q = _ordered_pair(group[2], group[3], counter)
        if policy is MedianPolicy.LOWER:
            return _second_smallest(p, q, counter)
        return _second_largest(p, q, counter)
    return _median_of_five(group, counter)


def medians_of_groups(s: ElementSequence, g: int, policy: MedianPolicy,
                      counter: ComparisonCounter) -> ElementSequence:
    """
    Sequence of group medians, in group order

    Args:
        s: Nonempty sequence
        g: Group size
        policy: Median policy for even-size groups
        counter: Comparison counter

    Returns:
        Sequence of length ceil(n/g)
    """
    return [group_median(group, policy, counter) for group in form_groups(s, g)]


def stable_partition(s: ElementSequence, pivot: Element,
                     counter: ComparisonCounter) -> Tuple[ElementSequence, ElementSequence]:
    """
    Split around a pivot, preserving relative order on both sides

    Uses exactly n - 1 comparisons. The pivot is located by origin index,
    which is bookkeeping, not a key comparison.

    Args:
        s: Sequence containing the pivot
        pivot: Partition element
        counter: Comparison counter

    Returns:
        (A1, A2): elements below and above the pivot
    """
    below, above = [], []
    found = False
    for x in s:
        if x.origin_index == pivot.origin_index:
            found = True
        elif counter.less(x, pivot):
            below.append(x)
        else:
            above.append(x)

    if not found:
        raise PivotNotFoundError()
    return below, above
