"""
Algorithm Model
Identifiers for the selection algorithms and selection requests
"""
import enum
from dataclasses import dataclass
from typing import Optional

from src.models.base import BaseModel
from src.models.element import ElementSequence, MedianPolicy


class AlgorithmKind(enum.Enum):
    """Selection algorithm families"""
    CLASSIC = 'classic'
    REPEATED_STEP_3 = 'repeated3'
    REPEATED_STEP_4 = 'repeated4'
    SHIFTING_TARGET_4 = 'shifting4'
    HYBRID_4 = 'hybrid4'
    SORTING_ORACLE = 'oracle'
    RANDOMIZED_QUICKSELECT = 'quickselect'


@dataclass(frozen=True)
class AlgorithmId(BaseModel):
    """
    Algorithm identifier

    group_size and policy are set for CLASSIC only; seed for RANDOMIZED_QUICKSELECT only.
    Classic(5, _) is the reference linear algorithm; Classic(3, _) and Classic(4, _) exist
    for the growth probe.
    """
    kind: AlgorithmKind
    group_size: Optional[int] = None
    policy: Optional[MedianPolicy] = None
    seed: Optional[int] = None

    @property
    def name(self) -> str:
        """Short name used in CLI flags, CSV rows and reports"""
        if self.kind is AlgorithmKind.CLASSIC:
            suffix = 'u' if self.policy is MedianPolicy.UPPER else ''
            return f"classic{self.group_size}{suffix}"
        return self.kind.value

    def __str__(self):
        return self.name

    @classmethod
    def classic(cls, group_size: int, policy: MedianPolicy = MedianPolicy.LOWER) -> 'AlgorithmId':
        return cls(AlgorithmKind.CLASSIC, group_size=group_size, policy=policy)

    @classmethod
    def quickselect(cls, seed: int = 0) -> 'AlgorithmId':
        return cls(AlgorithmKind.RANDOMIZED_QUICKSELECT, seed=seed)


REPEATED_STEP_3 = AlgorithmId(AlgorithmKind.REPEATED_STEP_3)
REPEATED_STEP_4 = AlgorithmId(AlgorithmKind.REPEATED_STEP_4)
SHIFTING_TARGET_4 = AlgorithmId(AlgorithmKind.SHIFTING_TARGET_4)
HYBRID_4 = AlgorithmId(AlgorithmKind.HYBRID_4)
SORTING_ORACLE = AlgorithmId(AlgorithmKind.SORTING_ORACLE)


@dataclass
class SelectionRequest:
    """Find the i-th smallest element (1-indexed) of a sequence"""
    sequence: ElementSequence
    i: int

    @property
    def n(self) -> int:
        return len(self.sequence)
