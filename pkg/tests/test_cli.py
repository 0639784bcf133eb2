import csv
import json

import numpy as np
import pandas as pd
import pytest

import main
from app.routes import SUITE_ORDER, Route, all_routes, get_route
from app.state import RunState
from engine.errors import OpenLoopError
from models.results import CheckReport, CheckStatus
from utils.app_init import initialize_engine, load_config
from utils.report_writer import build_report, to_jsonable, write_report, write_table


def read_report(path):
    with open(path, encoding='utf-8') as f:
        return json.load(f)


def read_csv(path):
    with open(path, newline='', encoding='utf-8') as f:
        return list(csv.reader(f))


class TestExitCodes:
    def test_half_hbar_sphere_passes(self, tmp_path):
        out = tmp_path / "report.json"
        code = main.main(['prequant', '--model', 'sphere', '--radius', '0.5', '--hbar', '1', '--out', str(out)])
        assert code == 0
        report = read_report(out)
        assert report['schema'] == 1
        assert report['passed'] is True
        [check] = report['checks']
        assert check['check_id'] == 'prequant.pc1.sphere'
        assert check['outputs']['ratio'] == pytest.approx(1.0, abs=1e-9)

    def test_incommensurable_product_fails(self, tmp_path):
        out = tmp_path / "report.json"
        code = main.main(['prequant', '--model', 'product-spheres', '--r1', '0.5', '--r2', '0.70710678',
                          '--out', str(out)])
        assert code == 1
        assert read_report(out)['checks'][0]['status'] == 'fail'

    def test_torus_model(self, tmp_path):
        code = main.main(['prequant', '--model', 'torus', '--scale', '1', '--lattice', '1', '1j',
                          '--out', str(tmp_path / "r.json")])
        assert code == 0

    def test_missing_radius(self, tmp_path):
        assert main.main(['prequant', '--model', 'sphere', '--out', str(tmp_path / "r.json")]) == 2

    def test_unknown_subcommand(self):
        assert main.main(['quantize-everything']) == 2

    def test_bad_choice(self):
        assert main.main(['pairing', '--kind', 'laplace']) == 2

    def test_non_positive_hbar(self):
        assert main.main(['spectrum', '--hbar', '-1']) == 2

    def test_truncation_too_small(self):
        assert main.main(['spectrum', '--n', '3']) == 2

    def test_fresnel_time_out_of_range(self):
        assert main.main(['fresnel', '--t', '0.5']) == 2

    def test_missing_config_file(self, tmp_path):
        assert main.main(['spectrum', '--config', str(tmp_path / "missing.yaml")]) == 2


class TestOutputs:
    def test_spectrum_levels_and_table(self, tmp_path):
        out = tmp_path / "report.json"
        code = main.main(['spectrum', '--n', '8', '--out', str(out), '--csv-dir', str(tmp_path)])
        assert code == 0
        checks = {c['check_id']: c for c in read_report(out)['checks']}
        assert set(checks) == {'spectrum.prequantum', 'spectrum.corrected', 'spectrum.schrodinger'}
        assert checks['spectrum.corrected']['outputs']['levels'] == pytest.approx([n + 0.5 for n in range(8)])

        rows = read_csv(tmp_path / "spectrum.csv")
        assert rows[0] == ['n', 'energy']
        assert [float(r[1]) for r in rows[1:]] == pytest.approx([n + 0.5 for n in range(8)])

    def test_hbar_scales_levels(self, tmp_path):
        out = tmp_path / "report.json"
        assert main.main(['--hbar', '2', 'spectrum', '--out', str(out)]) == 0
        report = read_report(out)
        assert report['hbar'] == 2.0
        levels = {c['check_id']: c for c in report['checks']}['spectrum.prequantum']['outputs']['levels']
        assert levels == pytest.approx([2.0 * n for n in range(8)])

    def test_report_to_stdout(self, capsys):
        assert main.main(['bohr', '--n-max', '2']) == 0
        report = json.loads(capsys.readouterr().out)
        levels = {c['check_id']: c for c in report['checks']}['bohr.levels']['outputs']['levels']
        assert levels == pytest.approx([0.5, 1.5, 2.5])

    def test_uncorrected_bohr_levels(self, capsys):
        assert main.main(['bohr', '--n-max', '2', '--shift', '0']) == 0
        report = json.loads(capsys.readouterr().out)
        levels = {c['check_id']: c for c in report['checks']}['bohr.levels']['outputs']['levels']
        assert levels == pytest.approx([0.0, 1.0, 2.0])

    def test_szego_table(self, tmp_path):
        code = main.main(['szego', '--model', 'bargmann', '--out', str(tmp_path / "r.json"),
                          '--csv-dir', str(tmp_path)])
        assert code == 0
        rows = read_csv(tmp_path / "szego-bargmann.csv")
        assert rows[0] == ['k', 'value']
        assert [int(r[0]) for r in rows[1:]] == [8, 12, 16, 24, 32, 48, 64]

    def test_dirac_suite(self, tmp_path):
        out = tmp_path / "r.json"
        assert main.main(['dirac', '--out', str(out)]) == 0
        ids = [c['check_id'] for c in read_report(out)['checks']]
        assert 'dirac.cubic-rejected' in ids

    def test_bogoliubov_warns_but_passes(self, tmp_path):
        out = tmp_path / "r.json"
        assert main.main(['pairing', '--kind', 'bogoliubov', '--out', str(out)]) == 0
        statuses = {c['check_id']: c['status'] for c in read_report(out)['checks']}
        assert statuses['pairing.bogoliubov.ground-state'] == 'pass'
        assert statuses['pairing.bogoliubov.printed-exponent'] == 'warn'


class TestParser:
    def test_every_suite_has_a_subcommand(self):
        assert [r.name for r in all_routes()] == SUITE_ORDER
        parser = main.build_parser()
        for name in SUITE_ORDER + ['all']:
            args = parser.parse_args([name])
            assert args.command == name

    def test_common_options_before_or_after_subcommand(self):
        parser = main.build_parser()
        assert parser.parse_args(['--hbar', '0.5', 'spectrum']).hbar == 0.5
        assert parser.parse_args(['spectrum', '--hbar', '0.5']).hbar == 0.5
        assert parser.parse_args(['spectrum']).hbar is None

    def test_unknown_route(self):
        with pytest.raises(KeyError):
            get_route('nope')


def test_engine_error_becomes_failed_check():
    def run(args, state):
        raise OpenLoopError("gap 1.0")

    state = RunState()
    reports = main.run_suite(Route('broken', '', lambda parser: None, run), None, state)
    assert [r.check_id for r in reports] == ['broken.error']
    assert reports[0].status == CheckStatus.FAIL
    assert reports[0].message.startswith('OpenLoopError')
    assert state.reports() == reports


class TestFullSuites:
    def test_all_suites(self, tmp_path):
        out = tmp_path / "report.json"
        assert main.main(['all', '--out', str(out), '--csv-dir', str(tmp_path)]) == 0
        report = read_report(out)
        prefixes = [c['check_id'].split('.')[0] for c in report['checks']]
        # suites appear in fixed order, whatever the thread pool did
        assert list(dict.fromkeys(prefixes)) == SUITE_ORDER
        assert {'fresnel.csv', 'bohr.csv', 'spectrum.csv'} <= {p.name for p in tmp_path.iterdir()}

    def test_all_suites_at_larger_hbar(self, tmp_path):
        out = tmp_path / "report.json"
        assert main.main(['--hbar', '2', 'all', '--out', str(out)]) == 0
        checks = {c['check_id']: c for c in read_report(out)['checks']}
        assert checks['prequant.pc1.projective-line']['status'] == 'pass'
        assert checks['fresnel.generator']['inputs']['hbar'] == '1.0'
        assert checks['fresnel.hbar-scaling']['inputs']['hbar'] == '2.0'

    def test_prequant_battery(self, tmp_path):
        out = tmp_path / "report.json"
        assert main.main(['prequant', '--out', str(out)]) == 0
        checks = {c['check_id']: c for c in read_report(out)['checks']}
        assert checks['prequant.curvature-order.disk']['outputs']['slope'] == pytest.approx(2.0, abs=0.3)
        defects = checks['prequant.kahler-potential']['outputs']['defects']
        assert set(defects) == {'flat', 'disk', 'torus', 'projective-line', 'sphere'}
        assert max(defects.values()) <= 1e-4
        assert {'prequant.holonomy.oscillator', 'prequant.holonomy.cylinder', 'prequant.torus-lattice'} <= set(checks)

    def test_fresnel_table(self, tmp_path):
        out = tmp_path / "report.json"
        assert main.main(['fresnel', '--out', str(out), '--csv-dir', str(tmp_path)]) == 0
        rows = read_csv(tmp_path / "fresnel.csv")
        assert rows[0] == ['t', 'residual']
        assert [float(r[0]) for r in rows[1:]] == [0.08, 0.04, 0.02, 0.01]
        checks = {c['check_id']: c for c in read_report(out)['checks']}
        generator = checks['fresnel.generator']['outputs']
        assert [s['state'] for s in generator['states']] == ['standard-gaussian', 'displaced-gaussian']
        assert generator['extrapolation_only'] == ['plane-wave-gaussian', 'flat-top']
        assert checks['fresnel.gaussian']['inputs']['a'] == '[0.5, 1.0, 4.0]'

    def test_pairing_battery(self, tmp_path):
        out = tmp_path / "report.json"
        assert main.main(['pairing', '--out', str(out)]) == 0
        prefixes = {'.'.join(c['check_id'].split('.')[:2]) for c in read_report(out)['checks']}
        assert prefixes == {'pairing.fourier', 'pairing.segal-bargmann', 'pairing.bogoliubov'}

    def test_szego_projective_line(self, tmp_path):
        out = tmp_path / "report.json"
        code = main.main(['szego', '--model', 'projective-line', '--out', str(out), '--csv-dir', str(tmp_path)])
        assert code == 0
        checks = {c['check_id']: c for c in read_report(out)['checks']}
        assert set(checks) == {'szego.reference-slope', 'szego.homogeneity.projective-line',
                               'szego.fit.projective-line', 'szego.trace.projective-line'}
        assert checks['szego.fit.projective-line']['outputs']['normalized_a0'] == pytest.approx(1.0, abs=0.02)
        assert read_csv(tmp_path / "szego-projective-line.csv")[0] == ['k', 'value']

    def test_reports_are_deterministic(self, tmp_path):
        def run(name):
            out = tmp_path / name
            assert main.main(['bohr', '--n-max', '3', '--out', str(out)]) == 0
            report = read_report(out)
            for check in report['checks']:
                check.pop('elapsed_ms')
            return report

        assert run("first.json") == run("second.json")


def test_value_error_in_one_suite_does_not_stop_all(tmp_path, monkeypatch):
    def run(args, state):
        raise ValueError("bad default")

    broken = Route('dirac', '', lambda parser: None, run)
    monkeypatch.setattr(main, 'all_routes', lambda: [broken, get_route('spectrum')])
    out = tmp_path / "report.json"
    assert main.main(['all', '--out', str(out)]) == 1
    checks = {c['check_id']: c for c in read_report(out)['checks']}
    assert checks['dirac.error']['status'] == 'fail'
    assert checks['dirac.error']['message'] == 'ValueError: bad default'
    assert checks['spectrum.corrected']['status'] == 'pass'


def test_value_error_outside_all_is_a_usage_error(state):
    def run(args, state):
        raise ValueError("bad option")

    with pytest.raises(ValueError):
        main.run_suite(Route('broken', '', lambda parser: None, run), None, state)


class TestReportWriter:
    def test_complex_and_non_finite_values(self):
        encoded = to_jsonable({'z': 1 + 2j, 'nan': float('nan'), 'inf': np.inf,
                               'array': np.array([1.5, 2.5]), 'flag': np.bool_(True), 'status': CheckStatus.WARN})
        assert encoded == {'z': {'re': 1.0, 'im': 2.0}, 'nan': None, 'inf': None,
                           'array': [1.5, 2.5], 'flag': True, 'status': 'warn'}

    def test_doubles_round_trip(self):
        value = 0.1 + 0.2
        assert to_jsonable(value) == value

    def test_report_passes_only_without_failures(self):
        warn = CheckReport('a', {}, {}, CheckStatus.WARN)
        fail = CheckReport('b', {}, {}, CheckStatus.FAIL)
        assert build_report([warn], 1.0)['passed'] is True
        assert build_report([warn, fail], 1.0)['passed'] is False

    def test_write_report(self, tmp_path):
        path = write_report(tmp_path / "nested" / "report.json",
                            [CheckReport('a', {'x': 1}, {'value': 1j}, CheckStatus.PASS)], hbar=0.5)
        report = read_report(path)
        assert report['checks'][0]['outputs']['value'] == {'re': 0.0, 'im': 1.0}
        assert report['checks'][0]['inputs'] == {'x': '1'}
        assert list((tmp_path / "nested").iterdir()) == [path]

    def test_write_table(self, tmp_path):
        path = write_table(tmp_path, 'fresnel', pd.DataFrame({'t': [0.02, 0.01], 'residual': [3e-3, 1.5e-3]}))
        assert read_csv(path)[0] == ['t', 'residual']


class TestRunState:
    def test_storage_split(self):
        state = RunState()
        state['config'] = {'a': 1}
        state['engine'] = object()
        assert 'config' in state.data
        assert 'engine' not in state.data
        assert 'engine' in state

    def test_reassignment_moves_between_storages(self):
        state = RunState()
        state['hbar'] = 1.0
        state['hbar'] = np.array([1.0])
        assert 'hbar' not in state.data
        assert state['hbar'].shape == (1,)
        with pytest.raises(KeyError):
            state['missing']

    def test_reports_in_requested_order(self):
        state = RunState()
        state.add_reports('szego', [CheckReport('s', {}, {}, CheckStatus.PASS)])
        state.add_reports('prequant', [CheckReport('p', {}, {}, CheckStatus.PASS)])
        assert [r.check_id for r in state.reports(SUITE_ORDER)] == ['p', 's']


class TestConfig:
    def test_sections(self, config):
        assert config['cli']['hbar'] == 1.0
        assert config['fresnel']['times'] == [0.08, 0.04, 0.02, 0.01]

    def test_missing_section(self, tmp_path):
        path = tmp_path / "partial.yaml"
        path.write_text("phase_space:\n  flow_steps: 64\n", encoding='utf-8')
        with pytest.raises(ValueError):
            load_config(path)

    def test_initialize_is_idempotent(self, state, config):
        checker = state['checker']
        initialize_engine(state)
        assert state['checker'] is checker
        assert state['schrodinger'].hbar == config['fresnel']['hbar']


@pytest.mark.parametrize("argv,section,key,value,check_id,status", [
    (['bohr'], 'prequant', 'level_tolerance', -1.0, 'bohr.levels', 'fail'),
    (['bohr'], 'phase_space', 'drift_tolerance', -1.0, 'bohr.classical-flow', 'fail'),
    (['szego', '--model', 'bargmann'], 'szego', 'homogeneity_tolerance', -1.0, 'szego.homogeneity.bargmann', 'fail'),
    (['szego', '--model', 'bargmann'], 'szego', 'reference_tolerance', -1.0, 'szego.reference-slope', 'fail'),
    (['pairing', '--kind', 'bogoliubov'], 'pairing', 'exponent_ratio_tolerance', 10.0,
     'pairing.bogoliubov.printed-exponent', 'pass'),
])
def test_tolerances_come_from_config(state, argv, section, key, value, check_id, status):
    state['config'][section][key] = value
    args = main.build_parser().parse_args(argv)
    args.hbar = 1.0
    reports = {r.check_id: r for r in main.run_suite(get_route(argv[0]), args, state)}
    assert reports[check_id].status.value == status
