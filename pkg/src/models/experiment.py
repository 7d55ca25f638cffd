"""
Experiment Models
Sweep specifications, aggregated scaling rows and growth-fit reports
"""
import enum
import re
from dataclasses import dataclass, field
from typing import List, Optional

from src.models.algorithm import AlgorithmId
from src.models.base import BaseModel
from src.models.generator_spec import GeneratorSpec
from src.utils.errors import ExperimentSpecError, InputFormatError, RankOutOfBoundsError

# Output CSV header of a scaling experiment
SCALING_FIELDS = ['algo', 'n', 'target', 'reps', 'mean_cmp', 'max_cmp', 'mean_cmp_per_elem',
                  'mean_depth']

QUANTILE_COUNT = 9


class TargetKind(enum.Enum):
    """Rules choosing the target rank i for a run"""
    MIDDLE = 'middle'
    EXTREME_LOW = 'low'
    EXTREME_HIGH = 'high'
    QUANTILES = 'quantiles'
    FIXED = 'fixed'


@dataclass(frozen=True)
class TargetRule(BaseModel):
    """
    Target rank rule

    QUANTILES cycles through q = 0.1..0.9 by repetition, so each row still
    aggregates exactly `repetitions` runs.
    """
    kind: TargetKind
    value: Optional[int] = None

    @property
    def label(self) -> str:
        if self.kind is TargetKind.FIXED:
            return f"fixed({self.value})"
        return self.kind.value

    def resolve(self, n: int, repetition: int = 0) -> int:
        """
        Target rank for a run on n elements

        Args:
            n: Input size
            repetition: Repetition index of the run

        Returns:
            1-indexed rank i
        """
        if self.kind is TargetKind.MIDDLE:
            return (n + 1) // 2
        if self.kind is TargetKind.EXTREME_LOW:
            return 1
        if self.kind is TargetKind.EXTREME_HIGH:
            return n
        if self.kind is TargetKind.QUANTILES:
            return quantile_rank(n, repetition % QUANTILE_COUNT)
        if not 1 <= self.value <= n:
            raise RankOutOfBoundsError(self.value, n)
        return self.value

    @classmethod
    def parse(cls, text: str) -> 'TargetRule':
        """Parse 'middle', 'low', 'high', 'quantiles' or 'fixed(i)'"""
        text = text.strip().lower()
        match = re.fullmatch(r'fixed\((\d+)\)', text)
        if match:
            return cls(TargetKind.FIXED, int(match.group(1)))
        try:
            kind = TargetKind(text)
        except ValueError:
            raise InputFormatError(f"unknown target rule '{text}'")
        if kind is TargetKind.FIXED:
            raise InputFormatError("fixed target needs a rank, e.g. fixed(5)")
        return cls(kind)


def quantile_rank(n: int, index: int) -> int:
    """Rank round(q·n) for q = (index + 1)/10, clamped to 1..n"""
    q_times_ten = index + 1
    # round-half-up on q·n = q_times_ten·n/10, in integers
    rank = (q_times_ten * n * 2 + 10) // 20
    return min(max(rank, 1), n)


@dataclass
class ExperimentSpec(BaseModel):
    """Declarative sweep: every (algorithm, size, repetition) cell is one run"""
    algorithms: List[AlgorithmId]
    sizes: List[int]
    target: TargetRule
    generator: GeneratorSpec
    repetitions: int = 1
    output: Optional[str] = None

    def validate(self):
        """
        Raises:
            ExperimentSpecError: empty algorithm or size list, non-increasing sizes,
                repetitions < 1
        """
        if not self.algorithms:
            raise ExperimentSpecError("experiment needs at least one algorithm")
        if not self.sizes:
            raise ExperimentSpecError("experiment needs at least one size")
        if any(n < 1 for n in self.sizes):
            raise ExperimentSpecError("sizes must be positive", details={'sizes': self.sizes})
        if any(b <= a for a, b in zip(self.sizes, self.sizes[1:])):
            raise ExperimentSpecError("sizes must be strictly increasing",
                                      details={'sizes': self.sizes})
        if self.repetitions < 1:
            raise ExperimentSpecError("repetitions must be at least 1")


@dataclass
class ScalingRow(BaseModel):
    """Aggregates of one (algorithm, n) cell over `reps` runs"""
    algo: str
    n: int
    target: str
    reps: int
    mean_cmp: float
    max_cmp: int
    mean_cmp_per_elem: float
    mean_depth: float


@dataclass
class GrowthFit(BaseModel):
    """
    Least-squares growth report for one algorithm

    exponent: slope of log(mean comparisons) against log n.
    per_element_slope: slope of mean comparisons / n against ln n (per e-fold).
    Evidence only: the report carries no linear/superlinear verdict.
    """
    algorithm: str
    sizes: List[int]
    exponent: float
    exponent_intercept: float
    exponent_residuals: List[float] = field(default_factory=list)
    per_element_slope: float = 0.0
    per_element_intercept: float = 0.0
    per_element_residuals: List[float] = field(default_factory=list)
    recurrence_coefficient_sum: Optional[str] = None
