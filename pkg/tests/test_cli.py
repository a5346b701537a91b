# Copyright (c) 2025 Denis Darkin
# SPDX-License-Identifier: MIT

import csv
import json

import pytest

import spinbundle


def _rewrite(path, **changes):
    data = json.loads(path.read_text(encoding='utf-8'))
    for key, value in changes.items():
        data[key] = value
    path.write_text(json.dumps(data), encoding='utf-8')
    return path


class TestVerify:

    def test_passes_and_is_deterministic(self, small_config, tmp_path):
        out = tmp_path / 'verify.json'
        assert spinbundle.main(['verify', '--config', str(small_config), '--out', str(out)]) == 0
        first = out.read_bytes()
        report = json.loads(first)
        assert report['status'] == 'pass'
        assert report['command'] == 'verify'
        assert {c['status'] for c in report['checks']} == {'pass'}
        assert (tmp_path / 'logs').is_dir()

        assert spinbundle.main(['verify', '--config', str(small_config), '--out', str(out)]) == 0
        assert out.read_bytes() == first

    def test_builtin_configuration_passes(self, tmp_path):
        out = tmp_path / 'default.json'
        assert spinbundle.main(['verify', '--out', str(out)]) == 0
        report = json.loads(out.read_text(encoding='utf-8'))
        checks = {c['name']: c for c in report['checks']}
        for name in ('measure_invariance', 'sigma_covariance', 'sigma_rotation_covariance',
                     'peres_contrast_sigma'):
            assert checks[name]['status'] == 'pass'

    def test_impossible_tolerance_fails(self, small_config, tmp_path):
        config = _rewrite(small_config, verify={'samples': 200, 'transforms': 2, 'states': 1,
                                                'tolerance': 1e-20})
        out = tmp_path / 'strict.json'
        assert spinbundle.main(['verify', '--config', str(config), '--out', str(out)]) == 1
        report = json.loads(out.read_text(encoding='utf-8'))
        assert report['status'] == 'fail'
        assert any(c['status'] == 'fail' for c in report['checks'])

    def test_csv_table(self, small_config, tmp_path):
        out = tmp_path / 'verify.csv'
        spinbundle.main(['verify', '--config', str(small_config), '--out', str(out), '--format', 'csv',
                         '--seed', '3'])
        rows = list(csv.DictReader(out.open(encoding='utf-8')))
        assert rows
        assert {'name', 'equation', 'residual', 'tolerance', 'status'} <= set(rows[0])


class TestCovariance:

    def test_csv_rows(self, small_config, tmp_path):
        out = tmp_path / 'covariance.csv'
        code = spinbundle.main(['covariance', '--config', str(small_config), '--out', str(out),
                                '--format', 'csv'])
        assert code == 0
        rows = list(csv.DictReader(out.open(encoding='utf-8')))
        assert len(rows) == 1
        assert 'sigma_residual' in rows[0]
        assert rows[0]['state'] == 'rest_up'
        assert rows[0]['sigma_verdict'] == 'covariant'

    def test_sigma_sweep(self, small_config, tmp_path):
        config = _rewrite(small_config, covariance={'sigma_sweep': [0.1, 0.25, 0.5, 0.1]},
                          transformations=[{'type': 'boost', 'axis': [1.0, 0.0, 0.0],
                                            'angle_or_rapidity': 1.0}])
        out = tmp_path / 'sweep.json'
        assert spinbundle.main(['covariance', '--config', str(config), '--out', str(out)]) == 0
        rows = json.loads(out.read_text(encoding='utf-8'))['rows']
        assert [r['state'] for r in rows] == ['rest_up', 'rest_up@sigma=0.1', 'rest_up@sigma=0.25']
        assert {r['sigma_verdict'] for r in rows} == {'covariant'}
        assert all(r['sigma_residual'] <= r['sigma_tolerance'] for r in rows)
        by_width = sorted(rows, key=lambda r: r['sigma'])
        shifts = [r['peres_shift'] for r in by_width]
        assert shifts[0] < shifts[1] < shifts[2]

    def test_under_resolved_grid_exits_with_1(self, small_config, tmp_path):
        out = tmp_path / 'coarse.json'
        assert spinbundle.main(['covariance', '--config', str(small_config), '--out', str(out),
                                '--grid-n', '12']) == 1
        report = json.loads(out.read_text(encoding='utf-8'))
        assert report['status'] == 'fail'
        assert report['rows'][0]['sigma_verdict'] in ('unresolved', 'non-covariant')
        assert report['rows'][0]['sigma_residual'] > report['rows'][0]['sigma_tolerance']

    def test_needs_transformations(self, small_config, tmp_path):
        config = _rewrite(small_config, transformations=[])
        assert spinbundle.main(['covariance', '--config', str(config),
                                '--out', str(tmp_path / 'none.json')]) == 2


class TestExpectation:

    def test_report(self, small_config, tmp_path):
        out = tmp_path / 'expectation.json'
        assert spinbundle.main(['expectation', '--config', str(small_config), '--out', str(out)]) == 0
        report = json.loads(out.read_text(encoding='utf-8'))
        (state,) = report['states']
        assert state['state'] == 'rest_up'
        assert state['theta_check']['status'] == 'pass'
        assert len(state['pauli_lubansky']) == 4
        assert len(state['newton_wigner']) == 3
        assert state['transformed'][0]['verdict'] == 'covariant'


@pytest.mark.parametrize("argv", [
    ['verify', '--config', 'does/not/exist.json'],
    ['verify', '--grid-n', '1'],
    ['covariance', '--pmax', '-2'],
])
def test_configuration_errors_exit_with_2(argv, tmp_path):
    assert spinbundle.main(argv + ['--out', str(tmp_path / 'report.json')]) == 2


def test_unknown_command_is_rejected():
    with pytest.raises(SystemExit) as info:
        spinbundle.main(['plot'])
    assert info.value.code == 2


def test_spread_floor_flag(small_config, tmp_path):
    out = tmp_path / 'floor.json'
    assert spinbundle.main(['covariance', '--config', str(small_config), '--out', str(out),
                            '--spread-floor', '0.9']) == 0
    (row,) = json.loads(out.read_text(encoding='utf-8'))['rows']
    assert len(row['warnings']) == 1
