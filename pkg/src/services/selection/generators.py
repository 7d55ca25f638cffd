"""
Input Generators
Deterministic corpora for verification, benchmarking and the growth probe

Randomness is normative so that fixtures are portable:
- generator family: numpy PCG64 seeded with the 64-bit spec seed
- uniform permutations: Durstenfeld shuffle of 1..n; for k = n-1 down to 1 draw
  j uniform in [0, k] (all draws taken at once with Generator.integers against the
  highs n, n-1, ..., 2) and swap positions k and j
- few-distinct keys: Generator.integers(1, k + 1, size=n)

The median killer is a best-effort adversary, not a proven worst case: every group
of three holds two keys from the lower two thirds around one key from the top third,
so every group median, and with them the pivot, comes from the lower part.
"""
import itertools
import logging
from typing import Iterator, List, Tuple

import numpy as np

from src.models.element import ElementSequence, make_sequence
from src.models.generator_spec import GeneratorKind, GeneratorSpec, SEED_MASK
from src.utils.errors import ExhaustiveDomainError, ValidationError

logger = logging.getLogger(__name__)

MAX_EXHAUSTIVE_N = 9


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed & SEED_MASK))


def uniform_permutation(n: int, seed: int) -> List[int]:
    """Seeded Durstenfeld shuffle of 1..n"""
    keys = list(range(1, n + 1))
    if n < 2:
        return keys
    draws = _rng(seed).integers(0, np.arange(n, 1, -1)).tolist()
    for step, j in enumerate(draws):
        k = n - 1 - step
        keys[k], keys[j] = keys[j], keys[k]
    return keys


def organ_pipe(n: int) -> List[int]:
    """1, 3, 5, ..., 6, 4, 2"""
    return list(range(1, n + 1, 2)) + list(range(n - n % 2, 0, -2))


def median_killer(n: int) -> List[int]:
    """Groups (low, high, low) so every group-of-3 median is a low key"""
    groups = n // 3
    lows = list(range(1, n - groups + 1))
    highs = list(range(n - groups + 1, n + 1))
    keys = []
    for j in range(groups):
        keys.extend((lows[2 * j], highs[j], lows[2 * j + 1]))
    keys.extend(lows[2 * groups:])
    return keys


def generate_keys(spec: GeneratorSpec) -> List[int]:
    """
    Raw keys of a generator spec

    Raises:
        ValidationError: n < 1, or few-distinct without a positive k
    """
    n = spec.n
    if n < 1:
        raise ValidationError("generator size must be at least 1", details={'spec': str(spec)})

    kind = spec.kind
    if kind is GeneratorKind.UNIFORM:
        return uniform_permutation(n, spec.seed)
    if kind is GeneratorKind.SORTED:
        return list(range(1, n + 1))
    if kind is GeneratorKind.REVERSED:
        return list(range(n, 0, -1))
    if kind is GeneratorKind.ORGAN_PIPE:
        return organ_pipe(n)
    if kind is GeneratorKind.FEW_DISTINCT:
        if not spec.k or spec.k < 1:
            raise ValidationError("few-distinct generator needs k ≥ 1", details={'k': spec.k})
        return _rng(spec.seed).integers(1, spec.k + 1, size=n).tolist()
    return median_killer(n)


def generate(spec: GeneratorSpec) -> ElementSequence:
    """
    Deterministic input sequence of a generator spec

    Args:
        spec: Generator specification

    Returns:
        Sequence with origin indices 0..n-1
    """
    logger.debug(f"Generating {spec}")
    return make_sequence(generate_keys(spec))


def exhaustive_permutations(n: int) -> Iterator[Tuple[int, ...]]:
    """
    All n! permutations of 1..n, in lexicographic order

    Raises:
        ExhaustiveDomainError: n > 9
        ValidationError: n < 1
    """
    if n > MAX_EXHAUSTIVE_N:
        raise ExhaustiveDomainError(n)
    if n < 1:
        raise ValidationError("exhaustive size must be at least 1", details={'n': n})
    return itertools.permutations(range(1, n + 1))


def splitmix64(value: int) -> int:
    """SplitMix64 finalizer over a 64-bit value"""
    z = (value + 0x9E3779B97F4A7C15) & SEED_MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & SEED_MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & SEED_MASK
    return z ^ (z >> 31)


def derive_seed(base_seed: int, size_index: int, repetition: int) -> int:
    """Cell seed: splitmix64(base ⊕ splitmix64(size_index·2^32 + repetition))"""
    cell = ((size_index & 0xFFFFFFFF) << 32) | (repetition & 0xFFFFFFFF)
    return splitmix64((base_seed & SEED_MASK) ^ splitmix64(cell))
