"""
Selection Service
High-level service providing a unified interface to selection, verification and traces
"""
import logging
import math
from typing import Callable, Iterable, List, Optional, Sequence

import pandas as pd

from src.config import config
from src.models import (
    Counterexample,
    ElementSequence,
    GeneratorSpec,
    RunReport,
    TRACE_FIELDS,
    VerificationSummary,
    make_sequence,
)
from src.models.experiment import quantile_rank
from src.models.generator_spec import GeneratorKind
from src.services.selection.algorithms import VERIFIED_ALGORITHMS, parse_algorithm, run_selection
from src.services.selection.generators import derive_seed, exhaustive_permutations, generate
from src.services.selection.instrumentation import check_run
from src.services.selection.primitives import ComparisonCounter
from src.utils.errors import InputFormatError, SelectionError, ValidationError
from src.utils.output import output_errors, prepare_output_path

logger = logging.getLogger(__name__)

CounterFactory = Callable[[], ComparisonCounter]


def parse_number(text: str):
    """
    Parse one decimal integer or float

    Raises:
        InputFormatError: not a number, or NaN
    """
    text = text.strip()
    try:
        return int(text)
    except ValueError:
        pass
    try:
        value = float(text)
    except ValueError:
        raise InputFormatError(f"not a number: '{text}'")
    if math.isnan(value):
        raise InputFormatError("NaN keys are not totally ordered")
    return value


def parse_numbers(text: str, separator: Optional[str] = ',') -> List:
    """Parse a separated list of numbers; blank items are skipped"""
    items = text.split(separator) if separator else text.splitlines()
    return [parse_number(item) for item in items if item.strip()]


def load_numbers(path: str) -> List:
    """
    Read a UTF-8 file with one number per line

    Raises:
        InputFormatError: unreadable file or malformed line
    """
    try:
        with open(path, 'r', encoding='utf-8') as f:
            text = f.read()
    except OSError as e:
        raise InputFormatError(f"cannot read '{path}': {e}")
    except UnicodeDecodeError as e:
        raise InputFormatError(f"'{path}' is not valid UTF-8: {e.reason} at byte {e.start}")
    return parse_numbers(text, separator=None)


def resolve_input(data: Optional[str] = None, file: Optional[str] = None,
                  gen: Optional[str] = None, seed: Optional[int] = None) -> ElementSequence:
    """
    Build the input sequence from exactly one source

    Args:
        data: Inline comma-separated numbers
        file: Path of a one-number-per-line file
        gen: Compact generator spec string
        seed: Overrides the generator seed when given

    Returns:
        Sequence with origin indices 0..n-1
    """
    sources = [source for source in (data, file, gen) if source is not None]
    if len(sources) != 1:
        raise ValidationError("exactly one input source is required (--data, --file or --gen)")

    if data is not None:
        return make_sequence(parse_numbers(data))
    if file is not None:
        return make_sequence(load_numbers(file))

    spec = GeneratorSpec.parse(gen)
    if seed is not None:
        spec = spec.with_seed(seed)
    return generate(spec)


def write_trace(report: RunReport, path: Optional[str] = None) -> str:
    """
    Serialize a run report

    A path ending in .csv gets one CSV row per trace event; anything else gets
    the RunReport JSON. Without a path the JSON is returned only.

    Returns:
        The serialized text (JSON, or the CSV written)
    """
    if path and path.endswith('.csv'):
        prepare_output_path(path)
        frame = pd.DataFrame(report.trace_rows(), columns=TRACE_FIELDS)
        with output_errors(path):
            frame.to_csv(path, index=False, lineterminator='\n')
        logger.info(f"Trace saved: {path}")
        return frame.to_csv(index=False, lineterminator='\n')

    text = report.to_json()
    if path:
        prepare_output_path(path)
        with output_errors(path), open(path, 'w') as f:
            f.write(text + '\n')
        logger.info(f"Trace saved: {path}")
    return text


class SelectionService:
    """
    Unified selection service
    Handles input loading, instrumented selection and oracle verification
    """

    def __init__(self, seed: Optional[int] = None):
        self.seed = config.DEFAULT_SEED if seed is None else seed

    def select(self, algorithm: str, i: int, sequence: ElementSequence,
               counter: Optional[ComparisonCounter] = None) -> RunReport:
        """
        Run one instrumented selection

        Args:
            algorithm: Short algorithm name (see ALGORITHM_NAMES)
            i: 1-indexed target rank
            sequence: Input sequence
            counter: Comparison counter (optional)

        Returns:
            RunReport
        """
        algorithm_id = parse_algorithm(algorithm, self.seed)
        report = run_selection(algorithm_id, sequence, i, counter)
        logger.info(f"{algorithm_id.name}: n={report.n} i={i} key={report.result_key} "
                    f"comparisons={report.total_comparisons}")
        return report

    def verify_algorithms(self, max_exhaustive: Optional[int] = None, trials: int = 0,
                          sizes: Sequence[int] = (),
                          algorithms: Optional[Iterable[str]] = None,
                          counter_factory: CounterFactory = ComparisonCounter,
                          fail_fast: bool = True) -> VerificationSummary:
        """
        Oracle equivalence and instrumentation checks

        Exhaustive phase: every permutation of 1..n for n = 1..max_exhaustive, every i.
        Randomized phase: `trials` seeded uniform permutations per size, targets from the
        9-quantile sweep. Every run's trace goes through check_run.

        Args:
            max_exhaustive: Largest exhaustive size (config.MAX_EXHAUSTIVE_N by default)
            trials: Randomized trials per size
            sizes: Randomized trial sizes
            algorithms: Algorithm names (VERIFIED_ALGORITHMS by default)
            counter_factory: Builds the counter of each run (mutation testing hook)
            fail_fast: Stop at the first failure

        Returns:
            VerificationSummary
        """
        max_exhaustive = config.MAX_EXHAUSTIVE_N if max_exhaustive is None else max_exhaustive
        names = list(algorithms or VERIFIED_ALGORITHMS)
        algorithm_ids = [parse_algorithm(name, self.seed) for name in names]
        summary = VerificationSummary(
            algorithms=[a.name for a in algorithm_ids],
            max_exhaustive=max_exhaustive,
            sizes=list(sizes),
            trials=trials,
        )

        logger.info(f"Verifying {len(algorithm_ids)} algorithms, exhaustive n ≤ {max_exhaustive}")
        for n in range(1, max_exhaustive + 1):
            for permutation in exhaustive_permutations(n):
                sequence = make_sequence(permutation)
                for i in range(1, n + 1):
                    for algorithm_id in algorithm_ids:
                        summary.exhaustive_checks += 1
                        if not self._check(algorithm_id, sequence, i, counter_factory, summary) \
                                and fail_fast:
                            return self._finish(summary)
            logger.debug(f"Exhaustive n={n} done")

        for size_index, n in enumerate(sizes):
            logger.info(f"Randomized trials at n={n}")
            for trial in range(trials):
                seed = derive_seed(self.seed, size_index, trial)
                sequence = generate(GeneratorSpec(GeneratorKind.UNIFORM, n, seed))
                i = quantile_rank(n, trial % 9)
                for algorithm_id in algorithm_ids:
                    summary.randomized_checks += 1
                    if not self._check(algorithm_id, sequence, i, counter_factory, summary) \
                            and fail_fast:
                        return self._finish(summary)

        return self._finish(summary)

    @staticmethod
    def _check(algorithm_id, sequence: ElementSequence, i: int,
               counter_factory: CounterFactory, summary: VerificationSummary) -> bool:
        expected = sorted(sequence)[i - 1]
        actual = None
        try:
            report = run_selection(algorithm_id, sequence, i, counter_factory())
            actual = report.result
            summary.events_checked += len(report.iterations)
            if actual != expected:
                reason = 'result differs from the oracle'
            else:
                result = check_run(report)
                reason = None if result else result.explanation
        except SelectionError as e:
            reason = e.message

        if reason is None:
            return True

        summary.failures += 1
        if summary.counterexample is None:
            summary.counterexample = Counterexample(
                algorithm=algorithm_id.name,
                keys=[e.key for e in sequence],
                i=i,
                expected_key=expected.key,
                actual_key=actual.key if actual is not None else None,
                reason=reason,
            )
            logger.error(f"Verification failure: {summary.counterexample.describe()}")
        return False

    @staticmethod
    def _finish(summary: VerificationSummary) -> VerificationSummary:
        logger.info(f"Verification {'passed' if summary.passed else 'failed'}: "
                    f"{summary.total_checks} equivalence checks, "
                    f"{summary.events_checked} events")
        return summary

