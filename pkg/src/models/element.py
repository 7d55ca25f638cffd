"""
Element Model
Keyed elements, working sequences and the even-group median policy
"""
import enum
from numbers import Real
from typing import Iterable, List, NamedTuple


class Element(NamedTuple):
    """
    One input element

    Tuple ordering compares (key, origin_index) lexicographically, which is the
    tie-normalized total order: duplicate keys become distinct by input position.
    """
    key: Real
    origin_index: int


# Working array; relative order is meaningful and preserved by partitioning
ElementSequence = List[Element]


class MedianPolicy(enum.Enum):
    """Median selection convention for even-size groups"""
    LOWER = 'lower'
    UPPER = 'upper'

    def rank(self, size: int) -> int:
        """
        1-indexed rank selected from a group of the given size

        Odd groups use the true median under both policies.
        """
        if size % 2 == 1:
            return (size + 1) // 2
        if self is MedianPolicy.LOWER:
            return size // 2
        return size // 2 + 1

    def members_at_most(self, size: int) -> int:
        """Group members ≤ the selected median, the median included"""
        return self.rank(size)

    def members_at_least(self, size: int) -> int:
        """Group members ≥ the selected median, the median included"""
        return size - self.rank(size) + 1


def make_sequence(keys: Iterable[Real]) -> ElementSequence:
    """
    Wrap raw keys as elements, numbering origin indices from 0

    Args:
        keys: Iterable of totally ordered numeric keys

    Returns:
        List of Element in input order
    """
    return [Element(key, index) for index, key in enumerate(keys)]


def keys_of(elements: Iterable[Element]) -> List[Real]:
    """Return the bare keys of a sequence, in order"""
    return [e.key for e in elements]
