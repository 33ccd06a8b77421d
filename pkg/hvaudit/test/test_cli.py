"""
Tests for the command-line front end
"""
import csv
import io
import json
import math

import pytest

from hvaudit.cli import main

QUIET = ['--log-level', 'WARNING']
SMALL_AUDIT = ['--theta-points', '20', '--v-points', '200', '--phi-points', '4', '--grid', '8']


def run_json(capsys, *argv):
    code = main(QUIET + list(argv) + ['--format', 'json'])
    return code, json.loads(capsys.readouterr().out)


def run_csv(capsys, *argv):
    code = main(QUIET + list(argv) + ['--format', 'csv'])
    return code, list(csv.DictReader(io.StringIO(capsys.readouterr().out)))


def by_name(document):
    return {row['name']: row for row in document['results']}


class TestOracleCommand:

    def test_table_output(self, capsys):
        assert main(QUIET + ['oracle', '--theta', '0', '--phi', '0']) == 0
        out = capsys.readouterr().out
        assert 'P[X=Y]' in out
        assert 'correlation' in out

    def test_degrees(self, capsys):
        code, document = run_json(capsys, 'oracle', '--theta', '0', '--phi', '60', '--degrees')
        assert code == 0
        rows = by_name(document)
        assert rows['joint(+1,+1)']['quantity'] == pytest.approx(0.125, abs=1e-12)
        assert rows['conditional(y=+1|x=-1)']['quantity'] == pytest.approx(0.75, abs=1e-12)
        assert document['config']['phi'] == pytest.approx(math.pi / 3)
        assert document['config']['degrees'] is False

    def test_degrees_wrap_to_canonical_setting(self, capsys):
        _, document = run_json(capsys, 'oracle', '--theta', '200', '--phi', '80', '--degrees')
        assert document['config']['theta'] == pytest.approx(math.radians(20), abs=1e-12)
        assert by_name(document)['correlation']['quantity'] == pytest.approx(-0.5, abs=1e-12)
        joint = sum(row['quantity'] for name, row in by_name(document).items() if name.startswith('joint('))
        assert joint == pytest.approx(1.0, abs=1e-12)

    def test_hex_seed(self, capsys):
        _, document = run_json(capsys, 'oracle', '--seed', '0x10')
        assert document['seed'] == 16
        assert document['config']['seed_hex'] == '0x10'

    def test_malformed_angle(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(QUIET + ['oracle', '--theta', 'x'])
        assert exc.value.code == 2

    def test_hidden_value_out_of_range(self, capsys):
        assert main(QUIET + ['oracle', '--v', '1.5']) == 2
        assert 'error:' in capsys.readouterr().err


class TestAuditCommand:

    def test_disjoint(self, capsys):
        code, document = run_json(capsys, 'audit', '--variant', 'disjoint', *SMALL_AUDIT)
        assert code == 0
        rows = by_name(document)
        assert rows['theta_independence']['passed'] is True
        assert rows['theta_independence']['quantity'] == 0.0
        assert rows['faithfulness']['passed'] is True
        assert rows['l_case_census']['passed'] is False

    def test_overlap(self, capsys):
        code, document = run_json(capsys, 'audit', '--variant', 'overlap', *SMALL_AUDIT)
        assert code == 0
        rows = by_name(document)
        independence = rows['theta_independence']
        assert independence['passed'] is False
        assert independence['quantity'] == 0.5
        assert independence['witnesses']
        assert rows['theta_independence_witness']['witnesses'][0]['l_values'] == [1.0, 0.5]
        assert rows['observable_nonsignaling']['passed'] is True
        assert rows['uniform_conditional']['passed'] is False

    def test_loose_tolerance_is_reported(self, capsys):
        code, document = run_json(capsys, 'audit', '--variant', 'overlap', '--tol', '2.0', *SMALL_AUDIT)
        assert code == 1
        assert any('maximal possible spread' in w for w in document['warnings'])

    def test_replay_is_byte_identical(self, capsys, tmp_path):
        report = tmp_path / 'overlap.json'
        argv = QUIET + ['audit', '--variant', 'overlap', '--format', 'json', '--out', str(report)] + SMALL_AUDIT
        assert main(argv) == 0
        first = report.read_bytes()

        assert main(QUIET + ['audit', '--config', str(report)]) == 0
        assert report.read_bytes() == first

    def test_yaml_config(self, capsys, tmp_path):
        config = tmp_path / 'run.yaml'
        config.write_text('variant: overlap\ntol: 1e-9\ntheta_points: 10\nv_points: 100\nphi_points: 2\n')
        code, document = run_json(capsys, 'audit', '--config', str(config))
        assert code == 0
        assert document['config']['tol'] == 1e-9
        assert document['config']['variant'] == 'overlap'


class TestSweepCommand:

    def test_correlation_csv(self, capsys):
        code, rows = run_csv(capsys, 'sweep', '--quantity', 'correlation', '--steps', '8')
        assert code == 0
        assert len(rows) == 8
        for row in rows:
            assert float(row['correlation']) == pytest.approx(math.cos(2 * float(row['phi'])), abs=1e-12)

    def test_l_along_theta(self, capsys):
        code, rows = run_csv(capsys, 'sweep', '--quantity', 'L', '--axis', 'theta', '--phi', '1.0471975512',
                             '--v', '0.1', '--variant', 'overlap', '--steps', '60')
        assert code == 0
        values = {float(row['l_plus']) for row in rows}
        assert values <= {0.0, 0.5, 1.0}
        assert len(values) > 1

    def test_monte_carlo_columns(self, capsys):
        _, rows = run_csv(capsys, 'sweep', '--steps', '3', '--monte-carlo', '--n', '5000')
        assert {'mc_correlation', 'mc_ci_low', 'mc_ci_high'} <= set(rows[0])

    def test_degree_bounds_keep_half_turn(self, capsys):
        code, document = run_json(capsys, 'sweep', '--degrees', '--start', '0', '--stop', '180', '--steps', '4')
        assert code == 0
        assert document['config']['stop'] == pytest.approx(math.pi, abs=1e-12)

    def test_empty_range(self, capsys):
        assert main(QUIET + ['sweep', '--start', '1', '--stop', '1']) == 2
        assert 'empty sweep range' in capsys.readouterr().err


class TestModelCommand:

    def test_rows(self, capsys):
        code, document = run_json(capsys, 'model', '--variant', 'overlap', '--phi', '1.0471975512',
                                  '--v', '0.1', '--n', '20000', '--confidence', '0.999999')
        assert code == 0
        checked = [row for row in document['results'] if row['expected'] is not None]
        assert len(checked) == 7
        assert all(row['passed'] is True for row in checked)
        rows = by_name(document)
        assert rows['sample_run']['x'] in (1, -1)
        assert rows['joint(+1,+1)']['exact'] == pytest.approx(0.125, abs=1e-9)
        assert rows['L(v=0.1,y=+1)']['quantity'] == 1.0
        assert rows['chsh']['exact'] == pytest.approx(2.8284271247461903, abs=1e-12)


class TestLemmaCommand:

    def test_eight_levels(self, capsys):
        code, document = run_json(capsys, 'lemma', '--dim', '8', '--seed', '7', '--matrices', '5')
        assert code == 0
        zp = by_name(document)['zp_commutator']
        assert zp['diagonal'] == pytest.approx([1.0] * 7 + [-7.0], abs=1e-10)
        assert by_name(document)['function_commutators']['passed'] is True

    def test_two_levels(self, capsys):
        _, document = run_json(capsys, 'lemma', '--dim', '2', '--matrices', '3')
        assert by_name(document)['zp_commutator']['diagonal'] == pytest.approx([1.0, -1.0], abs=1e-10)

    def test_dimension_one(self, capsys):
        assert main(QUIET + ['lemma', '--dim', '1']) == 2
        assert 'dimension must be at least 2' in capsys.readouterr().err
