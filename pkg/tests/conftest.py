"""
Shared test fixtures
"""
import os

os.environ.setdefault('SELECT_ENV', 'testing')

import pytest  # noqa: E402

from src.models import GeneratorKind, GeneratorSpec  # noqa: E402
from src.services.selection.generators import generate  # noqa: E402
from src.services.selection.primitives import ComparisonCounter  # noqa: E402
from src.services.selection_service import SelectionService  # noqa: E402


@pytest.fixture
def counter():
    return ComparisonCounter()


@pytest.fixture
def service():
    return SelectionService(seed=0)


@pytest.fixture
def shuffled():
    """Seeded permutation of 1..n"""

    def build(n, seed=1):
        return generate(GeneratorSpec(GeneratorKind.UNIFORM, n, seed))

    return build

