"""
Command-Line Interface
select | verify | bench | probe

Every command is a thin shell over the library; stdout carries results only,
logs go to stderr. Exit codes: 0 success, 1 verification failure, 2 usage error.

Usage:
    python -m src.cli select --algo repeated3 --i 2 --data 3,1,2
    python -m src.cli verify --max-exhaustive 6 --sizes 1000,10000 --trials 20
    python -m src.cli bench --algos classic5,oracle --sizes 1000,10000,100000,1000000 --reps 3
    python -m src.cli probe --sizes 2187,6561,19683,59049 --gen uniform,killer --reps 3
"""
import argparse
import os
import sys
from typing import List, Optional

from src.config import config
from src.models import GeneratorSpec
from src.models.experiment import ExperimentSpec, TargetRule
from src.services.selection.algorithms import ALGORITHM_NAMES, parse_algorithm
from src.services.selection.experiments import (
    default_probe_sizes,
    growth_report,
    load_experiment_spec,
    run_experiment,
    run_probe,
    write_fits,
)
from src.services.selection_service import SelectionService, resolve_input, write_trace
from src.utils.errors import EXIT_OK, EXIT_VERIFICATION_FAILURE, InputFormatError, handle_cli_errors
from src.utils.logger import setup_logging


def _int_list(text: str) -> List[int]:
    try:
        return [int(item) for item in text.split(',') if item.strip()]
    except ValueError:
        raise InputFormatError(f"expected a comma-separated list of integers, got '{text}'")


def _name_list(text: str) -> List[str]:
    return [item.strip() for item in text.split(',') if item.strip()]


def _seed(args) -> int:
    return config.DEFAULT_SEED if args.seed is None else args.seed


def _generator(text: str, args) -> GeneratorSpec:
    """Generator family with n filled in per size; --seed overrides the string's seed"""
    generator = GeneratorSpec.parse(text, default_n=1)
    return generator if args.seed is None else generator.with_seed(args.seed)


@handle_cli_errors
def cmd_select(args) -> int:
    """Print the i-th smallest key; with --trace also the run report"""
    sequence = resolve_input(args.data, args.file, args.gen, args.seed)
    report = SelectionService(_seed(args)).select(args.algo, args.i, sequence)
    print(report.result_key)

    if args.trace:
        text = write_trace(report, args.out)
        if not args.out:
            print(text)
    return EXIT_OK


@handle_cli_errors
def cmd_verify(args) -> int:
    """Exhaustive and randomized oracle equivalence plus all trace checks"""
    service = SelectionService(_seed(args))
    summary = service.verify_algorithms(
        max_exhaustive=args.max_exhaustive,
        trials=args.trials,
        sizes=_int_list(args.sizes) if args.sizes else [],
        algorithms=_name_list(args.algos) if args.algos else None,
    )
    print(summary.render())
    return EXIT_OK if summary.passed else EXIT_VERIFICATION_FAILURE


def _bench_spec(args) -> ExperimentSpec:
    if args.spec:
        return load_experiment_spec(args.spec)
    if not args.algos or not args.sizes:
        raise InputFormatError("bench needs --spec or both --algos and --sizes")
    generator = _generator(args.gen, args)
    return ExperimentSpec(
        algorithms=[parse_algorithm(name, _seed(args)) for name in _name_list(args.algos)],
        sizes=_int_list(args.sizes),
        target=TargetRule.parse(args.target),
        generator=generator,
        repetitions=args.reps,
        output=args.out or os.path.join(config.OUTPUT_DIR, 'bench.csv'),
    )


def _print_fits(fits):
    for fit in fits:
        recurrence = (f" recurrence_sum={fit.recurrence_coefficient_sum}"
                      if fit.recurrence_coefficient_sum else '')
        print(f"{fit.algorithm}: exponent={fit.exponent:.4f} "
              f"per_element_slope={fit.per_element_slope:.4f} "
              f"max_abs_residual={max(abs(r) for r in fit.per_element_residuals):.4f}"
              f"{recurrence}")


@handle_cli_errors
def cmd_bench(args) -> int:
    """Run a scaling experiment and its growth fits"""
    spec = _bench_spec(args)
    rows = run_experiment(spec)
    fits = growth_report(rows, args.min_decades)
    if spec.output:
        print(f"rows: {spec.output}")
        fit_path = os.path.splitext(spec.output)[0] + '_fit.json'
        write_fits(fits, fit_path)
        print(f"fits: {fit_path}")
    _print_fits(fits)
    return EXIT_OK


@handle_cli_errors
def cmd_probe(args) -> int:
    """Growth probe of classic SELECT with groups of 3 and 4"""
    sizes = _int_list(args.sizes) if args.sizes else default_probe_sizes()
    generators = [_generator(text, args) for text in _name_list(args.gen)]
    output_dir = args.out or os.path.join(config.OUTPUT_DIR, 'probe')
    results = run_probe(sizes, generators, args.reps, output_dir, args.min_decades)
    for kind, (rows, fits) in results.items():
        print(f"[{kind}] {len(rows)} rows in {output_dir}")
        _print_fits(fits)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='smallselect',
        description='Deterministic selection with small groups: run, verify, benchmark, probe'
    )
    parser.add_argument('--log-level', type=str, default=None,
                        help=f'Log level (default: {config.LOG_LEVEL})')
    subparsers = parser.add_subparsers(dest='command', required=True)

    select = subparsers.add_parser('select', help='Select the i-th smallest element')
    select.add_argument('--algo', type=str, required=True,
                        help=f"Algorithm ({', '.join(ALGORITHM_NAMES)})")
    select.add_argument('--i', type=int, required=True, help='1-indexed target rank')
    source = select.add_mutually_exclusive_group(required=True)
    source.add_argument('--data', type=str, help='Inline comma-separated numbers')
    source.add_argument('--file', type=str, help='File with one number per line')
    source.add_argument('--gen', type=str, help='Generator spec, e.g. uniform:n=1000:seed=7')
    select.add_argument('--seed', type=int, default=None,
                        help='Overrides the generator seed and seeds quickselect pivots')
    select.add_argument('--trace', action='store_true', help='Emit the run report')
    select.add_argument('--out', type=str, default=None,
                        help='Trace path (.csv for trace rows, otherwise JSON)')
    select.set_defaults(handler=cmd_select)

    verify = subparsers.add_parser('verify', help='Check all algorithms against the oracle')
    verify.add_argument('--max-exhaustive', type=int, default=config.MAX_EXHAUSTIVE_N,
                        help=f'Largest exhaustive size (default: {config.MAX_EXHAUSTIVE_N})')
    verify.add_argument('--trials', type=int, default=0,
                        help='Randomized trials per size (default: 0)')
    verify.add_argument('--sizes', type=str, default=None,
                        help='Comma-separated sizes for randomized trials')
    verify.add_argument('--algos', type=str, default=None,
                        help='Comma-separated algorithms (default: all verified algorithms)')
    verify.add_argument('--seed', type=int, default=None, help='Base seed')
    verify.set_defaults(handler=cmd_verify)

    bench = subparsers.add_parser('bench', help='Run a scaling experiment')
    bench.add_argument('--spec', type=str, default=None, help='Experiment spec JSON file')
    bench.add_argument('--algos', type=str, default=None, help='Comma-separated algorithms')
    bench.add_argument('--sizes', type=str, default=None, help='Comma-separated sizes')
    bench.add_argument('--target', type=str, default='middle',
                       help='middle, low, high, quantiles or fixed(i) (default: middle)')
    bench.add_argument('--gen', type=str, default='uniform',
                       help='Generator family, n is set per size (default: uniform)')
    bench.add_argument('--reps', type=int, default=1, help='Repetitions per size (default: 1)')
    bench.add_argument('--seed', type=int, default=None, help='Base seed')
    bench.add_argument('--out', type=str, default=None,
                       help=f'Output CSV (default: {config.OUTPUT_DIR}/bench.csv)')
    bench.add_argument('--min-decades', type=float, default=config.PROBE_MIN_DECADES,
                       help=f'Minimum size span for fits (default: {config.PROBE_MIN_DECADES})')
    bench.set_defaults(handler=cmd_bench)

    probe = subparsers.add_parser('probe', help='Growth probe for groups of 3 and 4')
    probe.add_argument('--sizes', type=str, default=None,
                       help='Comma-separated sizes (default: 3^7..3^10)')
    probe.add_argument('--gen', type=str, default='uniform,killer',
                       help='Comma-separated generator families (default: uniform,killer)')
    probe.add_argument('--reps', type=int, default=3, help='Repetitions per size (default: 3)')
    probe.add_argument('--seed', type=int, default=None, help='Base seed')
    probe.add_argument('--out', type=str, default=None,
                       help=f'Output directory (default: {config.OUTPUT_DIR}/probe)')
    probe.add_argument('--min-decades', type=float, default=config.PROBE_MIN_DECADES,
                       help=f'Minimum size span for fits (default: {config.PROBE_MIN_DECADES})')
    probe.set_defaults(handler=cmd_probe)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point"""
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level)
    return args.handler(args)


if __name__ == '__main__':
    sys.exit(main())
