"""
Scaling Experiments
Declarative sweeps, growth fits and the small-group growth probe

A sweep runs every (algorithm, size, repetition) cell. Inputs are shared by all
algorithms of a cell: the input seed is derive_seed(base seed, size index, repetition).
Every run is checked inline by the instrumentation; a violation aborts the sweep.

growth_fit reports slopes and residuals only. A finite sweep is evidence, not proof,
and the report deliberately carries no linear/superlinear verdict.
"""
import json
import logging
import math
import os
from collections import defaultdict
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np
import pandas as pd
from sklearn.linear_model import LinearRegression

from src.config import config
from src.models.experiment import (
    ExperimentSpec,
    GrowthFit,
    ScalingRow,
    SCALING_FIELDS,
    TargetKind,
    TargetRule,
)
from src.models.generator_spec import GeneratorSpec
from src.models.trace import RunReport
from src.services.selection.algorithms import (
    PROBE_ALGORITHMS,
    get_algorithm,
    parse_algorithm,
    run_selection,
)
from src.services.selection.generators import derive_seed, generate
from src.services.selection.instrumentation import check_run
from src.utils.errors import (
    ExperimentSpecError,
    InputFormatError,
    InsufficientSizesError,
    InvariantViolationError,
    validate_required_fields,
)
from src.utils.output import output_errors, prepare_output_path

logger = logging.getLogger(__name__)

MIN_FIT_SIZES = 4


def certify(report: RunReport) -> RunReport:
    """
    Run all instrumentation checks on a report

    Raises:
        InvariantViolationError: any check fails
    """
    result = check_run(report)
    if not result:
        raise InvariantViolationError(
            f"invariant violation in {report.algorithm.name} (n={report.n}, i={report.i}): "
            f"{result.explanation}",
            payload={'algorithm': report.algorithm.name, 'n': report.n, 'i': report.i},
        )
    return report


def run_experiment(spec: ExperimentSpec) -> List[ScalingRow]:
    """
    Execute a sweep and aggregate one row per (algorithm, size)

    Args:
        spec: Experiment specification

    Returns:
        Rows in spec order: algorithms outer, sizes inner

    Raises:
        OutputPathError: spec.output cannot be written, checked before any cell runs
    """
    spec.validate()
    if spec.output:
        prepare_output_path(spec.output)
    logger.info(f"Running experiment: {len(spec.algorithms)} algorithms x {len(spec.sizes)} sizes "
                f"x {spec.repetitions} reps, target={spec.target.label}, "
                f"generator={spec.generator.kind.value}")

    comparisons: Dict[tuple, List[int]] = defaultdict(list)
    depths: Dict[tuple, List[int]] = defaultdict(list)

    for size_index, n in enumerate(spec.sizes):
        for repetition in range(spec.repetitions):
            seed = derive_seed(spec.generator.seed, size_index, repetition)
            sequence = generate(spec.generator.with_n(n).with_seed(seed))
            i = spec.target.resolve(n, repetition)

            for algorithm_index, algorithm_id in enumerate(spec.algorithms):
                report = certify(run_selection(algorithm_id, sequence, i))
                comparisons[(algorithm_index, size_index)].append(report.total_comparisons)
                depths[(algorithm_index, size_index)].append(report.max_depth)

        logger.debug(f"Finished size n={n}")

    rows = []
    for algorithm_index, algorithm_id in enumerate(spec.algorithms):
        for size_index, n in enumerate(spec.sizes):
            cell = comparisons[(algorithm_index, size_index)]
            rows.append(ScalingRow(
                algo=algorithm_id.name,
                n=n,
                target=spec.target.label,
                reps=len(cell),
                mean_cmp=float(np.mean(cell)),
                max_cmp=int(np.max(cell)),
                mean_cmp_per_elem=float(np.mean(cell)) / n,
                mean_depth=float(np.mean(depths[(algorithm_index, size_index)])),
            ))

    if spec.output:
        write_rows(rows, spec.output)

    logger.info(f"Experiment completed: {len(rows)} rows, all runs certified")
    return rows


def rows_to_frame(rows: Sequence[ScalingRow]) -> pd.DataFrame:
    return pd.DataFrame([row.to_dict() for row in rows], columns=SCALING_FIELDS)


def write_rows(rows: Sequence[ScalingRow], path: str) -> str:
    """
    Write scaling rows as CSV with the fixed header

    Raises:
        OutputPathError: output path not writable
    """
    prepare_output_path(path)
    with output_errors(path):
        rows_to_frame(rows).to_csv(path, index=False, lineterminator='\n')
    logger.info(f"Rows saved: {path}")
    return path


def _linear_fit(x: np.ndarray, y: np.ndarray):
    model = LinearRegression()
    model.fit(x.reshape(-1, 1), y)
    residuals = y - model.predict(x.reshape(-1, 1))
    return float(model.coef_[0]), float(model.intercept_), [float(r) for r in residuals]


def growth_fit(rows: Sequence[ScalingRow], min_decades: Optional[float] = None,
               coefficient_sum: Optional[str] = None) -> GrowthFit:
    """
    Fit comparison growth of one algorithm

    Two least-squares fits: log(mean comparisons) against log n (the exponent), and
    mean comparisons / n against ln n (per-element slope per e-fold).

    Args:
        rows: Rows of a single algorithm
        min_decades: Minimum span of sizes in decades (config.FIT_MIN_DECADES by default)
        coefficient_sum: Recurrence coefficient sum to carry for context (optional)

    Returns:
        GrowthFit

    Raises:
        InsufficientSizesError: fewer than 4 distinct sizes, too narrow a span, or
            rows from several algorithms
    """
    min_decades = config.FIT_MIN_DECADES if min_decades is None else min_decades
    algorithms = {row.algo for row in rows}
    if len(algorithms) != 1:
        raise InsufficientSizesError("growth fit needs rows of exactly one algorithm",
                                     details={'algorithms': sorted(algorithms)})

    ordered = sorted(rows, key=lambda row: row.n)
    sizes = [row.n for row in ordered]
    if len(set(sizes)) < MIN_FIT_SIZES:
        raise InsufficientSizesError(f"growth fit needs at least {MIN_FIT_SIZES} distinct sizes",
                                     details={'sizes': sizes})
    span = math.log10(sizes[-1] / sizes[0])
    if span < min_decades - 1e-9:
        raise InsufficientSizesError(f"sizes span {span:.2f} decades, need {min_decades}",
                                     details={'sizes': sizes})
    if any(row.mean_cmp <= 0 for row in ordered):
        raise InsufficientSizesError("growth fit needs positive comparison counts",
                                     details={'sizes': sizes})

    log_n = np.log(np.array(sizes, dtype=float))
    mean_cmp = np.array([row.mean_cmp for row in ordered], dtype=float)

    exponent, exponent_intercept, exponent_residuals = _linear_fit(log_n, np.log(mean_cmp))
    per_element = mean_cmp / np.array(sizes, dtype=float)
    slope, intercept, residuals = _linear_fit(log_n, per_element)

    return GrowthFit(
        algorithm=ordered[0].algo,
        sizes=sizes,
        exponent=exponent,
        exponent_intercept=exponent_intercept,
        exponent_residuals=exponent_residuals,
        per_element_slope=slope,
        per_element_intercept=intercept,
        per_element_residuals=residuals,
        recurrence_coefficient_sum=coefficient_sum,
    )


def growth_report(rows: Sequence[ScalingRow],
                  min_decades: Optional[float] = None) -> List[GrowthFit]:
    """
    Growth fit per algorithm, in row order; algorithms whose sizes do not qualify are skipped

    Each fit carries its algorithm's recurrence coefficient sum when one is known.
    """
    by_algorithm: Dict[str, List[ScalingRow]] = defaultdict(list)
    for row in rows:
        by_algorithm[row.algo].append(row)

    fits = []
    for name, algorithm_rows in by_algorithm.items():
        coefficient_sum = get_algorithm(parse_algorithm(name)).coefficient_sum
        try:
            fits.append(growth_fit(algorithm_rows, min_decades,
                                   str(coefficient_sum) if coefficient_sum is not None else None))
        except InsufficientSizesError as e:
            logger.warning(f"No growth fit for {name}: {e.message}")
    return fits


def write_fits(fits: Iterable[GrowthFit], path: str) -> str:
    """Write growth fits as a JSON document"""
    prepare_output_path(path)
    with output_errors(path), open(path, 'w') as f:
        json.dump({'fits': [fit.to_dict() for fit in fits]}, f, indent=2)
    logger.info(f"Fit report saved: {path}")
    return path


def probe_spec(sizes: Sequence[int], generator: GeneratorSpec, repetitions: int,
               output: Optional[str] = None) -> ExperimentSpec:
    """
    Growth probe: classic SELECT with groups of 3 and 4 under both policies, with
    repeated-step (groups of 3) and classic groups of 5 as linear controls
    """
    return ExperimentSpec(
        algorithms=[parse_algorithm(name) for name in PROBE_ALGORITHMS],
        sizes=list(sizes),
        target=TargetRule(TargetKind.MIDDLE),
        generator=generator,
        repetitions=repetitions,
        output=output,
    )


def run_probe(sizes: Sequence[int], generators: Sequence[GeneratorSpec], repetitions: int,
              output_dir: str, min_decades: Optional[float] = None):
    """
    Run the growth probe once per input family

    Writes probe_<kind>.csv and probe_<kind>_fit.json into output_dir.

    Returns:
        {generator kind: (rows, fits)}
    """
    results = {}
    for generator in generators:
        stem = os.path.join(output_dir, f"probe_{generator.kind.value}")
        rows = run_experiment(probe_spec(sizes, generator, repetitions, f"{stem}.csv"))
        fits = growth_report(rows, min_decades)
        write_fits(fits, f"{stem}_fit.json")
        results[generator.kind.value] = (rows, fits)
    return results


def default_probe_sizes(low_power: int = 7, high_power: int = 10) -> List[int]:
    """Powers of three 3^low_power .. 3^high_power"""
    return [3 ** k for k in range(low_power, high_power + 1)]


def spec_from_dict(data: dict) -> ExperimentSpec:
    """
    Build an ExperimentSpec from a JSON document

    Document fields: algorithms (names), sizes, target ('middle', 'low', 'high',
    'quantiles', 'fixed(i)'), generator (compact string, its n is replaced per size),
    repetitions, optional output, optional seed (quickselect pivot seed).
    """
    validate_required_fields(data, ['algorithms', 'sizes', 'generator'])
    seed = int(data.get('seed', config.DEFAULT_SEED))
    try:
        sizes = [int(n) for n in data['sizes']]
        repetitions = int(data.get('repetitions', 1))
    except (TypeError, ValueError):
        raise ExperimentSpecError("sizes and repetitions must be integers")

    return ExperimentSpec(
        algorithms=[parse_algorithm(name, seed) for name in data['algorithms']],
        sizes=sizes,
        target=TargetRule.parse(data.get('target', 'middle')),
        generator=GeneratorSpec.parse(data['generator'], default_n=1),
        repetitions=repetitions,
        output=data.get('output'),
    )


def load_experiment_spec(path: str) -> ExperimentSpec:
    """Load an ExperimentSpec from a JSON file"""
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = json.load(f)
    except OSError as e:
        raise InputFormatError(f"cannot read experiment spec '{path}': {e}")
    except json.JSONDecodeError as e:
        raise InputFormatError(f"experiment spec '{path}' is not valid JSON: {e}")
    except UnicodeDecodeError as e:
        raise InputFormatError(f"experiment spec '{path}' is not valid UTF-8: {e.reason}")
    if not isinstance(data, dict):
        raise InputFormatError("experiment spec must be a JSON object")
    return spec_from_dict(data)
