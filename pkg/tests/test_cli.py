import csv
import io
import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

import bsf_farm
from bsf_farm import CliConfig, ConfigError, build_config, parse_arguments
from costmodel import BsfParams, SWEEP_COLUMNS, scalability_bound, sweep_values
from payloads import SyntheticProgram
from runtime import ValidationReport
from simulator import CURVE_COLUMNS, TIMELINE_COLUMNS
from utils import OutputFormatter, json_safe, parse_k_spec

ROOT = Path(__file__).resolve().parent.parent
WORKED = ['--L', '0.5', '--ts', '1', '--tw', '100', '--tr', '4', '--tp', '5']
DESK = ['--tw', '10000', '--L', '1', '--ts', '2']


def run_cli(*args, timeout=120):
    cmd = [sys.executable, str(ROOT / 'bsf_farm.py'), *args]
    return subprocess.run(cmd, capture_output=True, text=True, timeout=timeout, cwd=ROOT)


def read_csv(text):
    return list(csv.DictReader(io.StringIO(text)))


class TestKSpec:
    @pytest.mark.parametrize('spec,expected', [
        ('10', [10]),
        ('4,1,2,2', [1, 2, 4]),
        ('1:5', [1, 2, 3, 4, 5]),
        ('1:20:5', [1, 6, 11, 16]),
        ('1,3:4,10:30:10', [1, 3, 4, 10, 20, 30]),
        (7, [7]),
        ([3, 1], [1, 3]),
    ])
    def test_forms(self, spec, expected):
        assert parse_k_spec(spec) == expected

    @pytest.mark.parametrize('spec', ['0', '-2', '5:1', '1:5:0', 'a', '1:2:3:4', '', ','])
    def test_invalid(self, spec):
        with pytest.raises(ValueError):
            parse_k_spec(spec)


class TestOutputFormatter:
    def test_json_is_strict_and_sorted(self):
        text = OutputFormatter('json').to_json({'b': float('inf'), 'a': float('nan')})
        assert json.loads(text) == {'a': 'nan', 'b': 'inf'}
        assert text.index('"a"') < text.index('"b"')

    def test_json_safe_handles_numpy(self):
        assert json_safe({'x': np.array([1.0, np.inf]), 'n': np.int64(3)}) == {'x': [1.0, 'inf'], 'n': 3}

    def test_csv_uses_repr_and_blanks(self):
        text = OutputFormatter('csv').to_csv([{'K': 1, 'v': 0.1, 'w': None}], ['K', 'v', 'w'])
        assert text == 'K,v,w\n1,0.1,\n'

    def test_unknown_format(self):
        with pytest.raises(ValueError):
            OutputFormatter('xml')


class TestConfig:
    def test_flags_override_config_file(self, tmp_path):
        path = tmp_path / 'cfg.json'
        path.write_text(json.dumps({'tw': 100, 'L': 0.5, 'K': '1:4', 'format': 'json'}))
        config = build_config(parse_arguments(['predict', '--config', str(path), '--tw', '200']))
        assert config.t_w == 200.0
        assert config.L == 0.5
        assert config.K == (1, 2, 3, 4)
        assert config.format == 'json'

    def test_defaults(self):
        config = build_config(parse_arguments(['sweep', '--tw', '1']))
        assert config.mode == 'paper_faithful'
        assert config.format == 'table'
        assert config.seed == 0
        assert config.k_values() == list(range(1, 101))
        assert config.model_params() == BsfParams(t_w=1.0)

    @pytest.mark.parametrize('kwargs', [
        {'command': 'predict'},
        {'command': 'predict', 't_w': 1.0, 'payload': 'synthetic'},
        {'command': 'validate'},
        {'command': 'calibrate', 'payload': 'synthetic', 'L': 1.0},
        {'command': 'predict', 't_w': 1.0, 'format': 'xml'},
        {'command': 'predict', 't_w': 1.0, 'mode': 'eager'},
        {'command': 'simulate', 'payload': 'mandelbrot'},
        {'command': 'predict', 't_w': 1.0, 'repetitions': 0},
    ])
    def test_invalid_configurations(self, kwargs):
        with pytest.raises(ConfigError):
            CliConfig(**kwargs)

    def test_unknown_config_key(self, tmp_path):
        path = tmp_path / 'cfg.json'
        path.write_text(json.dumps({'tw': 1, 'colour': 'blue'}))
        with pytest.raises(ConfigError):
            build_config(parse_arguments(['predict', '--config', str(path)]))


class TestPredict:
    def test_desk_bound(self):
        result = run_cli('predict', *DESK, '--format', 'json')
        assert result.returncode == 0
        data = json.loads(result.stdout)
        assert data['report']['K_star'] == 50.0
        assert data['report']['K_opt'] == 50
        assert 'sweep' not in data

    def test_table_output(self):
        result = run_cli('predict', *DESK)
        assert result.returncode == 0
        assert 'K_star = 50' in result.stdout
        assert 'a_max' in result.stdout

    def test_no_work(self):
        result = run_cli('predict', '--tw', '0', '--L', '1', '--ts', '2', '--format', 'json')
        assert result.returncode == 0
        report = json.loads(result.stdout)['report']
        assert report['K_opt'] == 1
        assert report['note']

    def test_unbounded(self):
        result = run_cli('predict', '--tw', '100', '--L', '0', '--ts', '0', '--format', 'json')
        assert result.returncode == 0
        report = json.loads(result.stdout)['report']
        assert report['K_star'] == 'inf'
        assert report['unbounded'] is True
        assert 'unbounded' in result.stderr

    def test_sweep_file(self, tmp_path):
        out = tmp_path / 'sweep.csv'
        result = run_cli('predict', *DESK, '--K', '1:200', '--format', 'csv', '--out', str(out))
        assert result.returncode == 0
        assert result.stdout == ''
        rows = read_csv(out.read_text())
        assert list(rows[0]) == SWEEP_COLUMNS
        speedups = [float(r['speedup']) for r in rows]
        assert max(range(len(rows)), key=speedups.__getitem__) == 49
        assert all(a < b for a, b in zip(speedups[:50], speedups[1:50]))
        assert all(a > b for a, b in zip(speedups[49:], speedups[50:]))

    def test_numbers_match_library(self):
        result = run_cli('predict', *WORKED, '--K', '10', '--format', 'json')
        data = json.loads(result.stdout)
        p = BsfParams(L=0.5, t_s=1, t_w=100, t_r=4, t_p=5)
        assert data['sweep'] == [sweep_values(p, [10])[0].to_dict()]
        assert data['report']['K_star'] == scalability_bound(p).K_star

    @pytest.mark.parametrize('args', [
        ['predict', '--tw', '-1'],
        ['predict', '--tw', 'nan'],
        ['predict'],
        ['predict', '--tw', '1', '--K', '0'],
        ['predict', '--tw', '1', '--payload', 'synthetic'],
        ['predict', '--config', 'does-not-exist.json'],
        ['predict', '--tw', '1', '--mode', 'eager'],
        ['frobnicate'],
    ])
    def test_bad_arguments_exit_2(self, args):
        assert run_cli(*args).returncode == 2


class TestSweep:
    def test_csv_is_stable(self):
        first = run_cli('sweep', *WORKED, '--K', '1:50', '--format', 'csv')
        second = run_cli('sweep', *WORKED, '--K', '1:50', '--format', 'csv')
        assert first.returncode == 0
        assert first.stdout == second.stdout
        row = read_csv(first.stdout)[9]
        assert row['K'] == '10'
        assert float(row['T_K']) == pytest.approx(39)

    def test_no_work_leaves_approximation_blank(self):
        result = run_cli('sweep', '--L', '1', '--tr', '1', '--K', '1,2', '--format', 'csv')
        assert [r['efficiency_approx'] for r in read_csv(result.stdout)] == ['', '']


class TestSimulate:
    def test_summary_line(self):
        result = run_cli('simulate', *WORKED, '--K', '10')
        assert result.returncode == 0
        assert 'T_measured = 39' in result.stdout

    def test_single_worker_speedup(self):
        result = run_cli('simulate', *WORKED, '--K', '1', '--format', 'csv')
        assert result.returncode == 0
        assert 'speedup = 1' in result.stderr
        assert list(read_csv(result.stdout)[0]) == TIMELINE_COLUMNS

    def test_timeline_json(self):
        result = run_cli('simulate', *WORKED, '--K', '10', '--format', 'json', '--mode', 'pipelined')
        data = json.loads(result.stdout)
        assert data['T_measured'] <= 39
        assert data['events'][0]['kind'] == 'send_start'

    def test_run_json(self):
        result = run_cli('simulate', *WORKED, '--K', '10', '--iterations', '7', '--format', 'json')
        data = json.loads(result.stdout)
        assert data['iteration_count'] == 7
        assert data['total_time'] == pytest.approx(7 * 39)

    def test_curve_peaks_at_bound(self, tmp_path):
        out = tmp_path / 'curve.csv'
        result = run_cli('simulate', *DESK, '--K', '1:200', '--format', 'csv', '--out', str(out))
        assert result.returncode == 0
        assert 'K=50' in result.stderr
        rows = read_csv(out.read_text())
        assert list(rows[0]) == CURVE_COLUMNS
        assert max(rows, key=lambda r: float(r['speedup']))['K'] == '50'


class TestPayloadCommands:
    def test_calibrate(self):
        result = run_cli('calibrate', '--payload', 'synthetic', '--compute-ms', '20',
                         '--repetitions', '3', '--format', 'json')
        assert result.returncode == 0
        data = json.loads(result.stdout)
        assert data['params']['t_w'] == pytest.approx(0.020, rel=0.5)
        assert data['repetitions'] == 3

    def test_predict_from_payload(self):
        result = run_cli('predict', '--payload', 'synthetic', '--compute-ms', '5',
                         '--per-message', '1e-5', '--repetitions', '2', '--format', 'json')
        assert result.returncode == 0
        assert json.loads(result.stdout)['report']['K_opt'] >= 1

    def test_validate_synthetic(self):
        result = run_cli('validate', '--payload', 'synthetic', '--compute-ms', '50', '--K', '1,2,4',
                         '--repetitions', '2', '--iterations', '2', '--format', 'json')
        assert result.returncode == 0
        report = ValidationReport.from_dict(json.loads(result.stdout))
        assert [row.K for row in report.rows] == [1, 2, 4]
        assert all(row.error_simulated <= 1e-12 for row in report.rows)

    def test_validate_jacobi_single_worker(self):
        result = run_cli('validate', '--payload', 'jacobi', '--seed', '7', '--K', '1',
                         '--repetitions', '2', '--format', 'csv')
        assert result.returncode == 0
        [row] = read_csv(result.stdout)
        assert float(row['speedup_measured']) == 1.0

    def test_validate_needs_payload(self):
        assert run_cli('validate', '--K', '1').returncode == 2

    def test_bad_problem_file_exit_2(self, tmp_path):
        path = tmp_path / 'weak.txt'
        path.write_text("2 2\n1 1\n1 1\n2 1\n1\n1\n")
        result = run_cli('validate', '--payload', 'jacobi', '--problem', str(path), '--K', '1')
        assert result.returncode == 2

    def test_payload_failure_exit_3(self, monkeypatch):
        class DivergingProgram(SyntheticProgram):
            def worker_step(self, order, data_slice, worker):
                raise ArithmeticError('diverged')

        monkeypatch.setattr(bsf_farm, 'build_payload',
                            lambda name, **options: DivergingProgram(compute_ms=0))
        code = bsf_farm.main(['validate', '--payload', 'synthetic', '--K', '1',
                              '--repetitions', '1', '--format', 'json'])
        assert code == 3
