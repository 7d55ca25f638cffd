"""
Trace Models
Per-iteration trace events and the aggregate report of one selection run
"""
import json
from dataclasses import dataclass, field
from typing import List, Optional

from src.models.algorithm import AlgorithmId
from src.models.base import BaseModel
from src.models.element import Element, MedianPolicy

# Fixed CSV/JSON field names of one trace row
TRACE_FIELDS = ['iter', 'n', 'i', 'algo', 'policy', 'pivot_rank', 'a1', 'a2', 'cmp_delta']


@dataclass
class TraceEvent(BaseModel):
    """
    One partition iteration of the outer recursion

    Comparisons of the pivot-finding recursion are attributed to comparisons_delta.
    """
    iteration_index: int
    n: int
    i: int
    algorithm: AlgorithmId
    policy_used: Optional[MedianPolicy]
    pivot_rank: int
    size_a1: int
    size_a2: int
    comparisons_delta: int

    @property
    def found(self) -> bool:
        """Pivot is the target"""
        return self.size_a1 == self.i - 1

    @property
    def went_left(self) -> bool:
        """Recursion continues on A1 (largest elements discarded)"""
        return self.size_a1 > self.i - 1

    @property
    def went_right(self) -> bool:
        """Recursion continues on A2 (smallest elements discarded)"""
        return self.size_a1 < self.i - 1

    def to_row(self) -> dict:
        """Flat row with the fixed trace field names"""
        return {
            'iter': self.iteration_index,
            'n': self.n,
            'i': self.i,
            'algo': self.algorithm.name,
            'policy': self.policy_used.value if self.policy_used else '',
            'pivot_rank': self.pivot_rank,
            'a1': self.size_a1,
            'a2': self.size_a2,
            'cmp_delta': self.comparisons_delta,
        }


@dataclass
class RunReport(BaseModel):
    """
    Aggregate metrics of one selection run

    total_comparisons = sum of comparisons_delta + base_comparisons, and equals the
    final counter value. wall_time is informational only.
    """
    algorithm: AlgorithmId
    n: int
    i: int
    result: Element
    total_comparisons: int
    max_depth: int
    base_comparisons: int = 0
    iterations: List[TraceEvent] = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def result_key(self):
        return self.result.key

    def trace_rows(self) -> List[dict]:
        """One row per TraceEvent"""
        return [event.to_row() for event in self.iterations]

    def to_dict(self):
        """Convert report to dictionary for JSON output"""
        return {
            'algo': self.algorithm.name,
            'n': self.n,
            'i': self.i,
            'result_key': self.result.key,
            'result_origin_index': self.result.origin_index,
            'total_comparisons': self.total_comparisons,
            'base_comparisons': self.base_comparisons,
            'max_depth': self.max_depth,
            'wall_time': self.wall_time,
            'iterations': self.trace_rows(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)
