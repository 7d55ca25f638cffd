"""
Verification Models
Pass/fail summary of an oracle-equivalence and bound-check sweep
"""
from dataclasses import dataclass, field
from typing import List, Optional

from src.models.base import BaseModel


@dataclass
class Counterexample(BaseModel):
    """First input on which an algorithm disagreed with the oracle or failed a check"""
    algorithm: str
    keys: List[int]
    i: int
    expected_key: Optional[int]
    actual_key: Optional[int]
    reason: str

    def describe(self) -> str:
        shown = self.keys if len(self.keys) <= 20 else self.keys[:20] + ['...']
        return (f"{self.algorithm} i={self.i} keys={shown}: {self.reason} "
                f"(expected {self.expected_key}, got {self.actual_key})")


@dataclass
class VerificationSummary(BaseModel):
    """Counts of one verify run; passed is False as soon as any check failed"""
    algorithms: List[str]
    max_exhaustive: int
    sizes: List[int]
    trials: int
    exhaustive_checks: int = 0
    randomized_checks: int = 0
    events_checked: int = 0
    failures: int = 0
    counterexample: Optional[Counterexample] = None

    @property
    def passed(self) -> bool:
        return self.failures == 0

    @property
    def total_checks(self) -> int:
        return self.exhaustive_checks + self.randomized_checks

    def render(self) -> str:
        """Human-readable report, first line PASS or FAIL"""
        lines = [
            'PASS' if self.passed else 'FAIL',
            f"algorithms: {', '.join(self.algorithms)}",
            f"exhaustive equivalence checks (n = 1..{self.max_exhaustive}): "
            f"{self.exhaustive_checks}",
            f"randomized equivalence checks ({self.trials} trials at sizes {self.sizes}): "
            f"{self.randomized_checks}",
            f"trace events bound-checked: {self.events_checked}",
        ]
        if self.counterexample is not None:
            lines.append(f"counterexample: {self.counterexample.describe()}")
        return '\n'.join(lines)
