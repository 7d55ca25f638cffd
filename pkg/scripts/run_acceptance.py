"""
Acceptance Script
Runs the scaling acceptance criteria end to end and prints PASS/FAIL per criterion

Criteria:
- Linearity: per-element-vs-ln-n slope of every linear variant is at most 5% of the
  sorting oracle's slope on the same sizes (uniform permutations, middle target)
- Superlinearity control: the oracle's log-log exponent exceeds 1.05
- Probe: fits are emitted for classic SELECT with groups of 3 and 4, with no verdict text
- Determinism: repeating the linearity experiment with the same seeds gives a
  byte-identical CSV

The unit suite stays desk-fast; this script is the long-running counterpart (n up to 10^6).
"""
import argparse
import filecmp
import json
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.dirname(__file__)))

from src.config import config
from src.models import GeneratorSpec, GeneratorKind
from src.models.experiment import ExperimentSpec, TargetKind, TargetRule
from src.services.selection.algorithms import LINEAR_ALGORITHMS, parse_algorithm
from src.services.selection.experiments import growth_fit, run_experiment, run_probe
from src.utils.logger import setup_logging

SLOPE_RATIO_LIMIT = 0.05
ORACLE_EXPONENT_FLOOR = 1.05
PROBE_ALGORITHMS_REQUIRED = ['classic3', 'classic3u', 'classic4', 'classic4u']
VERDICT_WORDS = ('verdict', 'superlinear', 'is linear', 'not linear')


def half_decade_sizes(low_power: int, high_power: int):
    """10^low .. 10^high in half-decade steps"""
    sizes = []
    for step in range(2 * low_power, 2 * high_power + 1):
        sizes.append(int(round(10 ** (step / 2))))
    return sizes


def linearity_spec(sizes, reps, seed, output):
    return ExperimentSpec(
        algorithms=[parse_algorithm(name) for name in LINEAR_ALGORITHMS + ['oracle']],
        sizes=sizes,
        target=TargetRule(TargetKind.MIDDLE),
        generator=GeneratorSpec(GeneratorKind.UNIFORM, 1, seed),
        repetitions=reps,
        output=output,
    )


def check_linearity(rows):
    """Return (passed, oracle fit) for the linearity and superlinearity criteria"""
    by_algorithm = {}
    for row in rows:
        by_algorithm.setdefault(row.algo, []).append(row)

    oracle = growth_fit(by_algorithm['oracle'])
    limit = SLOPE_RATIO_LIMIT * oracle.per_element_slope
    print(f"oracle: exponent={oracle.exponent:.4f} "
          f"per_element_slope={oracle.per_element_slope:.4f}")

    passed = True
    for name in LINEAR_ALGORITHMS:
        fit = growth_fit(by_algorithm[name])
        ok = fit.per_element_slope <= limit
        passed = passed and ok
        print(f"  {'✅' if ok else '❌'} {name}: per_element_slope={fit.per_element_slope:.4f} "
              f"(limit {limit:.4f}), exponent={fit.exponent:.4f}")
    return passed, oracle


def check_probe(output_dir, seed):
    results = run_probe([3 ** k for k in range(7, 11)],
                        [GeneratorSpec(GeneratorKind.UNIFORM, 1, seed)], 3, output_dir,
                        config.PROBE_MIN_DECADES)
    rows, fits = results[GeneratorKind.UNIFORM.value]
    fitted = {fit.algorithm for fit in fits}
    missing = [name for name in PROBE_ALGORITHMS_REQUIRED if name not in fitted]

    with open(os.path.join(output_dir, 'probe_uniform_fit.json')) as f:
        text = f.read().lower()
    verdicts = [word for word in VERDICT_WORDS if word in text]
    has_residuals = all(fit['per_element_residuals'] for fit in json.loads(text)['fits'])

    print(f"  probe rows: {len(rows)}, fitted: {sorted(fitted)}")
    if missing:
        print(f"  ❌ missing fits: {missing}")
    if verdicts:
        print(f"  ❌ verdict text found: {verdicts}")
    return not missing and not verdicts and has_residuals


def main():
    """Main entry point"""
    parser = argparse.ArgumentParser(description='Run the scaling acceptance criteria')

    parser.add_argument(
        '--max-power',
        type=int,
        default=6,
        help='Largest size is 10^max-power; sizes span 3 decades below it (default: 6)'
    )
    parser.add_argument(
        '--reps',
        type=int,
        default=3,
        help='Repetitions per size (default: 3)'
    )
    parser.add_argument(
        '--seed',
        type=int,
        default=config.DEFAULT_SEED,
        help=f'Base seed (default: {config.DEFAULT_SEED})'
    )
    parser.add_argument(
        '--out',
        type=str,
        default=os.path.join(config.OUTPUT_DIR, 'acceptance'),
        help='Output directory'
    )

    args = parser.parse_args()
    setup_logging()

    sizes = half_decade_sizes(args.max_power - 3, args.max_power)
    first_csv = os.path.join(args.out, 'linearity.csv')
    second_csv = os.path.join(args.out, 'linearity_repeat.csv')
    results = {}

    print("=" * 60)
    print(f"Linearity (sizes {sizes[0]}..{sizes[-1]}, {args.reps} reps)")
    print("=" * 60)
    rows = run_experiment(linearity_spec(sizes, args.reps, args.seed, first_csv))
    results['linearity'], oracle = check_linearity(rows)

    print("\n" + "=" * 60)
    print("Superlinearity control")
    print("=" * 60)
    results['superlinearity control'] = oracle.exponent > ORACLE_EXPONENT_FLOOR
    print(f"  oracle exponent {oracle.exponent:.4f} > {ORACLE_EXPONENT_FLOOR}")

    print("\n" + "=" * 60)
    print("Growth probe")
    print("=" * 60)
    results['probe'] = check_probe(os.path.join(args.out, 'probe'), args.seed)

    print("\n" + "=" * 60)
    print("Determinism")
    print("=" * 60)
    run_experiment(linearity_spec(sizes, args.reps, args.seed, second_csv))
    results['determinism'] = filecmp.cmp(first_csv, second_csv, shallow=False)
    print(f"  {first_csv} == {second_csv}")

    print("\n" + "=" * 60)
    for name, passed in results.items():
        print(f"{'PASS' if passed else 'FAIL'}  {name}")
    print("=" * 60)

    sys.exit(0 if all(results.values()) else 1)


if __name__ == '__main__':
    main()
