"""
Selection Package
Deterministic small-group selection, its instrumentation, input generators and experiments
"""
from src.services.selection.algorithms import (
    ALGORITHM_NAMES,
    VERIFIED_ALGORITHMS,
    get_algorithm,
    parse_algorithm,
    run_selection,
)
from src.services.selection.primitives import ComparisonCounter, MutantComparisonCounter

__all__ = [
    'ALGORITHM_NAMES',
    'VERIFIED_ALGORITHMS',
    'get_algorithm',
    'parse_algorithm',
    'run_selection',
    'ComparisonCounter',
    'MutantComparisonCounter',
]
