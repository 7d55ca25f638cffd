"""
Tests for the command-line entry point
"""
import json

import pandas as pd
import pytest

from src.cli import main
from src.models.experiment import SCALING_FIELDS
from src.utils.errors import EXIT_OK, EXIT_USAGE_ERROR


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def run_with_errors(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().err


class TestSelectCommand:
    def test_inline_data(self, capsys):
        code, out = run(capsys, 'select', '--algo', 'repeated3', '--i', '2', '--data', '3,1,2')
        assert code == EXIT_OK
        assert out.strip() == '2'

    def test_generator(self, capsys):
        code, out = run(capsys, 'select', '--algo', 'shifting4', '--i', '1',
                        '--gen', 'sorted:n=10')
        assert code == EXIT_OK
        assert out.strip() == '1'

    def test_classic_matches_oracle(self, capsys):
        _, classic = run(capsys, 'select', '--algo', 'classic5', '--i', '500',
                         '--gen', 'uniform:n=1000:seed=7')
        _, oracle = run(capsys, 'select', '--algo', 'oracle', '--i', '500',
                        '--gen', 'uniform:n=1000:seed=7')
        assert classic == oracle

    def test_file(self, capsys, tmp_path):
        path = tmp_path / 'keys.txt'
        path.write_text('10\n-4\n2.5\n')
        code, out = run(capsys, 'select', '--algo', 'hybrid4', '--i', '2', '--file', str(path))
        assert code == EXIT_OK
        assert out.strip() == '2.5'

    def test_trace_to_stdout(self, capsys):
        code, out = run(capsys, 'select', '--algo', 'classic5', '--i', '10', '--trace',
                        '--gen', 'uniform:n=50:seed=1')
        key, document = out.split('\n', 1)
        assert key == '10'
        assert json.loads(document)['algo'] == 'classic5'

    def test_trace_csv(self, capsys, tmp_path):
        path = tmp_path / 'trace.csv'
        code, out = run(capsys, 'select', '--algo', 'classic4', '--i', '10', '--trace',
                        '--out', str(path), '--gen', 'uniform:n=200:seed=1')
        assert code == EXIT_OK
        assert out.strip() == '10'
        assert 'cmp_delta' in pd.read_csv(path).columns

    def test_rank_out_of_range(self, capsys):
        code, err = run_with_errors(capsys, 'select', '--algo', 'classic5', '--i', '5',
                                    '--data', '1,2')
        assert code == EXIT_USAGE_ERROR
        assert 'error: rank out of bounds' in err

    def test_malformed_data(self, capsys):
        code, _ = run(capsys, 'select', '--algo', 'classic5', '--i', '1', '--data', '1,x')
        assert code == EXIT_USAGE_ERROR

    def test_file_not_utf8(self, capsys, tmp_path):
        path = tmp_path / 'keys.txt'
        path.write_bytes(b'1\n\xff\xfe\n2\n')
        code, err = run_with_errors(capsys, 'select', '--algo', 'classic5', '--i', '1',
                                    '--file', str(path))
        assert code == EXIT_USAGE_ERROR
        assert 'not valid UTF-8' in err

    def test_trace_out_unwritable(self, capsys, tmp_path):
        blocker = tmp_path / 'blocker'
        blocker.write_text('')
        code, err = run_with_errors(capsys, 'select', '--algo', 'classic5', '--i', '1',
                                    '--data', '3,1,2', '--trace',
                                    '--out', str(blocker / 'trace.json'))
        assert code == EXIT_USAGE_ERROR
        assert 'cannot write' in err

    def test_unknown_algorithm(self, capsys):
        code, _ = run(capsys, 'select', '--algo', 'classic9', '--i', '1', '--data', '1')
        assert code == EXIT_USAGE_ERROR

    def test_missing_source(self, capsys):
        with pytest.raises(SystemExit) as exit_info:
            main(['select', '--algo', 'classic5', '--i', '1'])
        assert exit_info.value.code == EXIT_USAGE_ERROR


class TestVerifyCommand:
    def test_small_exhaustive(self, capsys):
        code, out = run(capsys, 'verify', '--max-exhaustive', '4')
        assert code == EXIT_OK
        lines = out.splitlines()
        assert lines[0] == 'PASS'
        assert '1071' in out

    def test_randomized(self, capsys):
        code, out = run(capsys, 'verify', '--max-exhaustive', '0', '--sizes', '500',
                        '--trials', '2', '--algos', 'classic5,shifting4')
        assert code == EXIT_OK
        assert 'randomized equivalence checks (2 trials at sizes [500]): 4' in out


class TestBenchAndProbe:
    def test_bench_inline(self, capsys, tmp_path):
        out_path = tmp_path / 'bench.csv'
        code, out = run(capsys, 'bench', '--algos', 'oracle,repeated3',
                        '--sizes', '100,300,1000,3000', '--reps', '2', '--out', str(out_path))
        assert code == EXIT_OK
        frame = pd.read_csv(out_path)
        assert list(frame.columns) == SCALING_FIELDS
        assert len(frame) == 8
        fits = json.loads((tmp_path / 'bench_fit.json').read_text())['fits']
        assert [fit['algorithm'] for fit in fits] == ['oracle', 'repeated3']

    def test_bench_spec_file(self, capsys, tmp_path):
        spec = tmp_path / 'spec.json'
        spec.write_text(json.dumps({'algorithms': ['classic5'], 'sizes': [20, 40],
                                    'generator': 'reversed',
                                    'output': str(tmp_path / 'rows.csv')}))
        code, _ = run(capsys, 'bench', '--spec', str(spec))
        assert code == EXIT_OK
        assert len(pd.read_csv(tmp_path / 'rows.csv')) == 2

    def test_bench_needs_algorithms(self, capsys):
        code, _ = run(capsys, 'bench', '--sizes', '10,20')
        assert code == EXIT_USAGE_ERROR

    def test_bench_output_under_a_file(self, capsys, tmp_path):
        blocker = tmp_path / 'blocker'
        blocker.write_text('')
        code, err = run_with_errors(capsys, 'bench', '--algos', 'oracle', '--sizes', '10,20',
                                    '--out', str(blocker / 'sub' / 'o.csv'))
        assert code == EXIT_USAGE_ERROR
        assert 'cannot write' in err
        assert 'details:' in err

    def test_small_group_sweep_output_under_a_file(self, capsys, tmp_path):
        blocker = tmp_path / 'blocker'
        blocker.write_text('')
        code, _ = run(capsys, 'probe', '--sizes', '27,81,243,729', '--gen', 'uniform',
                      '--reps', '1', '--out', str(blocker))
        assert code == EXIT_USAGE_ERROR

    def test_bench_decreasing_sizes(self, capsys, tmp_path):
        code, _ = run(capsys, 'bench', '--algos', 'oracle', '--sizes', '20,10',
                      '--out', str(tmp_path / 'x.csv'))
        assert code == EXIT_USAGE_ERROR

    def test_probe(self, capsys, tmp_path):
        code, out = run(capsys, 'probe', '--sizes', '27,81,243,729', '--gen', 'uniform',
                        '--reps', '1', '--out', str(tmp_path))
        assert code == EXIT_OK
        assert len(pd.read_csv(tmp_path / 'probe_uniform.csv')) == 24
        assert (tmp_path / 'probe_uniform_fit.json').exists()
        assert 'classic3:' in out and 'classic4u:' in out
