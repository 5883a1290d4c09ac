import csv
import json
import tempfile
from io import StringIO
from pathlib import Path
from unittest import mock

import numpy as np
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, tag

from cli.outputs import payload_lines
from cli.recipes import Check, preferred_convention
from collective.dressed import dressed_basis
from collective.couplings import Geometry
from drive.pulses import TABLE_DELTA1
from swingup.exceptions import IntegrationError

# Pulse-free runs on a short output grid
QUIET = ['pulse.alpha1=0', 'pulse.alpha2=0', 'n_points=5']


class CommandTestCase(SimpleTestCase):
    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self._tmp.cleanup)
        self.tmp = Path(self._tmp.name)

    def call(self, name, out=None, **options):
        stdout, stderr = StringIO(), StringIO()
        call_command(name, out=str(out or self.tmp), stdout=stdout, stderr=stderr, **options)
        return stdout.getvalue()

    def call_failing(self, name, **options):
        stdout, stderr = StringIO(), StringIO()
        with self.assertRaises(CommandError) as caught:
            call_command(name, out=str(self.tmp), stdout=stdout, stderr=stderr, **options)
        return caught.exception.returncode, json.loads(stderr.getvalue())

    def write_config(self, document):
        path = self.tmp / 'run.json'
        path.write_text(json.dumps(document), encoding='utf-8')
        return str(path)

    def read_csv(self, name, directory=None):
        lines = (directory or self.tmp).joinpath(name).read_text(encoding='utf-8').splitlines()
        metadata = [line for line in lines if line.startswith('#')]
        header, *rows = csv.reader(line for line in lines if not line.startswith('#'))
        return metadata, header, rows

    def read_json(self, name, directory=None):
        return json.loads((directory or self.tmp).joinpath(name).read_text(encoding='utf-8'))


class ConvertUnitsTests(CommandTestCase):
    def test_energy(self):
        self.assertEqual(self.call('convert_units', mev=-5).strip(), '-7.595580000000e+03')

    def test_time(self):
        self.assertEqual(self.call('convert_units', ps=6).strip(), '6.000000000000e-03')

    def test_needs_exactly_one_value(self):
        returncode, payload = self.call_failing('convert_units')
        self.assertEqual(returncode, 1)
        self.assertEqual(payload['error'], 'validation_error')
        self.assertIn('unit', payload['details'])


class ErrorStatusTests(CommandTestCase):
    def test_invalid_configuration_exits_with_one(self):
        returncode, payload = self.call_failing('simulate', config=self.write_config({'pulse': {'sigma1': -1}}))
        self.assertEqual(returncode, 1)
        self.assertEqual(payload['error'], 'validation_error')
        self.assertEqual(payload['details']['pulse']['sigma1'], ['must be > 0'])
        self.assertFalse((self.tmp / 'simulation.csv').exists())

    def test_unknown_override_exits_with_one(self):
        returncode, payload = self.call_failing('simulate', overrides=['pulse.alpah1=3'])
        self.assertEqual(returncode, 1)
        self.assertEqual(payload['details']['pulse']['alpah1'], ['unknown field'])

    def test_integration_failure_exits_with_two(self):
        failure = IntegrationError("step size became too small", time=0.01)
        with mock.patch('cli.management.commands.simulate.simulate', side_effect=failure):
            returncode, payload = self.call_failing('simulate', overrides=QUIET)
        self.assertEqual(returncode, 2)
        self.assertEqual(payload['error'], 'integration_error')
        self.assertEqual(payload['details'], {'time': 0.01})

    def test_cavity_observables_need_a_cavity(self):
        for name in ('spectrum', 'g2'):
            with self.subTest(command=name):
                returncode, payload = self.call_failing(name, overrides=QUIET)
                self.assertEqual(returncode, 1)
                self.assertEqual(payload['error'], 'configuration_error')

    def test_fock_flag_without_cavity_is_ignored(self):
        with self.assertLogs('cli.commands', 'WARNING'):
            self.call('simulate', fock=7, overrides=QUIET)
        self.assertTrue((self.tmp / 'simulation.csv').exists())


class OutputDirectoryTests(CommandTestCase):
    def test_config_directory_is_used_without_the_flag(self):
        target = self.tmp / 'from_config'
        config = self.write_config({'out': str(target), 'pulse': {'alpha1': 0, 'alpha2': 0}, 'n_points': 3})
        stdout, stderr = StringIO(), StringIO()
        call_command('simulate', config=config, stdout=stdout, stderr=stderr)
        self.assertTrue((target / 'simulation.csv').exists())

    def test_flag_wins_over_config(self):
        config = self.write_config({'out': str(self.tmp / 'unused'), 'pulse': {'alpha1': 0, 'alpha2': 0}})
        self.call('simulate', out=self.tmp / 'flag', config=config, overrides=['n_points=3'])
        self.assertTrue((self.tmp / 'flag' / 'simulation.csv').exists())
        self.assertFalse((self.tmp / 'unused').exists())


class CouplingsCommandTests(CommandTestCase):
    def test_curve_and_summary(self):
        stdout = self.call('couplings', d_min=0.01, d_max=0.1, n_d=5)
        metadata, header, rows = self.read_csv('couplings.csv')
        self.assertEqual(header, ['d_over_lambda', 'omega12', 'gamma12'])
        for row, d in zip(rows, np.linspace(0.01, 0.1, 5)):
            self.assertAlmostEqual(float(row[0]), d)
        self.assertEqual(len(rows), 5)
        self.assertIn('# command: couplings', metadata)

        summary = self.read_json('couplings.json')
        basis = dressed_basis(Geometry(d_over_lambda=0.01), TABLE_DELTA1)
        self.assertAlmostEqual(summary['omega12'], basis.omega12)
        self.assertAlmostEqual(summary['gamma12'], basis.gamma12)
        self.assertAlmostEqual(float(rows[0][1]), basis.omega12)
        self.assertIn('Omega12', stdout)

    def test_bad_range(self):
        returncode, payload = self.call_failing('couplings', d_min=0.5, d_max=0.1)
        self.assertEqual(returncode, 1)
        self.assertIn('d_range', payload['details'])


class SimulateCommandTests(CommandTestCase):
    def test_ground_state_stays_put(self):
        self.call('simulate', overrides=QUIET)
        metadata, header, rows = self.read_csv('simulation.csv')
        self.assertEqual(header, ['t', 'P_G', 'P_+', 'P_-', 'P_X', 'envelope1', 'envelope2'])
        self.assertEqual(len(rows), 5)
        self.assertAlmostEqual(float(rows[-1][1]), 1.0, places=10)
        self.assertIn('# basis: bare', metadata)

        summary = self.read_json('simulation.json')
        self.assertAlmostEqual(summary['final_populations']['P_G'], 1.0, places=10)
        self.assertEqual(summary['metadata']['command'], 'simulate')
        self.assertEqual(len(summary['metadata']['config_sha256']), 64)

    def test_cavity_adds_photon_number(self):
        self.call('simulate', overrides=QUIET + ['cavity={}'])
        _, header, rows = self.read_csv('simulation.csv')
        self.assertEqual(header[-1], 'photons')
        self.assertEqual(float(rows[-1][-1]), 0.0)
        self.assertEqual(self.read_json('simulation.json')['max_photons'], 0.0)

    def test_repeated_runs_write_the_same_data(self):
        overrides = ['pulse.alpha1_pi=68.25', 'pulse.alpha2_pi=59.05', 'n_points=11']
        first, second = self.tmp / 'first', self.tmp / 'second'
        self.call('simulate', out=first, overrides=overrides)
        self.call('simulate', out=second, overrides=overrides)
        for name in ('simulation.csv', 'simulation.json'):
            self.assertEqual(payload_lines(first / name), payload_lines(second / name))

    def test_help_states_the_time_window(self):
        from cli.management.commands.simulate import Command

        self.assertIn('-6*sqrt(2)*sigma', Command.help)
        self.assertIn('t_end = 0.02', Command.help)

    @tag('slow')
    def test_superradiant_final_row(self):
        self.call('simulate', overrides=[
            'pulse.alpha1_pi=68.25', 'pulse.alpha2_pi=59.05', 'n_points=21',
            f'pulse.envelope_convention={preferred_convention("+")}',
        ])
        _, header, rows = self.read_csv('simulation.csv')
        self.assertGreaterEqual(float(rows[-1][header.index('P_+')]), 0.91)


class DecayCommandTests(CommandTestCase):
    def test_empty_populations_have_no_fit(self):
        stdout = self.call('decay', overrides=QUIET + ['decay.horizon=0.2', 'decay.n_decay=11'])
        _, header, rows = self.read_csv('decay.csv')
        self.assertEqual(header[-1], 'independent')
        self.assertEqual(len(rows), 5 + 10)
        self.assertAlmostEqual(float(rows[-1][-1]), np.exp(-0.2))

        fits = self.read_json('decay.json')['fits']
        basis = dressed_basis(Geometry(d_over_lambda=0.01), TABLE_DELTA1)
        for label in ('+', '-'):
            self.assertIsNone(fits[label]['rate'])
            self.assertAlmostEqual(fits[label]['expected_rate'], basis.decay_rates[label])
        self.assertIn('No decay fit', stdout)


class SweepCommandTests(CommandTestCase):
    def test_small_grid(self):
        self.call('sweep', overrides=QUIET + [
            'sweep.axis1={"name": "tau", "lo": 0, "hi": 0.004, "n_points": 2}',
            'sweep.axis2={"name": "phi_x", "lo": 0, "hi": 1, "n_points": 3, "in_pi": true}',
            'sweep.targets=["P_G", "P_X"]',
        ])
        metadata, header, rows = self.read_csv('heatmap_P_G.csv')
        self.assertEqual(header[0], 'tau\\phi_x')
        self.assertEqual(len(header), 4)
        self.assertEqual(len(rows), 2)
        for row in rows:
            for value in row[1:]:
                self.assertAlmostEqual(float(value), 1.0, places=10)
        self.assertIn('# target: P_G', metadata)
        self.assertTrue((self.tmp / 'heatmap_P_X.csv').exists())
        self.assertFalse((self.tmp / 'heatmap_P_+.csv').exists())

        summary = self.read_json('heatmap.json')
        self.assertAlmostEqual(summary['best_cell']['P_G']['value'], 1.0, places=10)
        self.assertEqual(summary['failures'], [])
        self.assertEqual(summary['axis1']['name'], 'tau')

    def test_same_axis_twice_is_rejected(self):
        returncode, payload = self.call_failing('sweep', overrides=[
            'sweep.axis1={"name": "tau", "lo": 0, "hi": 1}',
            'sweep.axis2={"name": "tau", "lo": 0, "hi": 1}',
        ])
        self.assertEqual(returncode, 1)
        self.assertIn('axis2', payload['details']['sweep'])


class PhaseSweepCommandTests(CommandTestCase):
    def test_long_format_surfaces(self):
        self.call('phase_sweep', n_theta=3, overrides=QUIET)
        _, header, rows = self.read_csv('phase_sweep.csv')
        self.assertEqual(header, ['theta', 't', 'P_G', 'P_+', 'P_-', 'P_X'])
        self.assertEqual(len(rows), 3 * 5)
        summary = self.read_json('phase_sweep.json')
        self.assertEqual(len(summary['theta']), 3)
        for value in summary['final']['P_G']:
            self.assertAlmostEqual(value, 1.0, places=10)


class BlochCommandTests(CommandTestCase):
    def test_vectors_per_theta(self):
        self.call('bloch', overrides=QUIET + ['bloch.thetas=[0, 3.141592653589793]', 'bloch.targets=["+"]'])
        _, header, rows = self.read_csv('bloch.csv')
        self.assertEqual(header, ['theta', 't', 'a+_x', 'a+_y', 'a+_z'])
        self.assertEqual(len(rows), 2 * 5)
        final = self.read_json('bloch.json')['final']
        self.assertEqual(len(final), 2)
        for vectors in final.values():
            self.assertAlmostEqual(vectors['+'][2], -1.0, places=10)


class DisorderCommandTests(CommandTestCase):
    overrides = ['disorder.observables=["omega12", "gamma12"]', 'disorder.n_samples=4', 'disorder.width=0.05']

    def test_static_ensemble(self):
        self.call('disorder', seed=7, overrides=self.overrides)
        metadata, header, rows = self.read_csv('disorder.csv')
        self.assertEqual(header, ['sample', 'draw1', 'draw2', 'omega12', 'gamma12'])
        self.assertEqual([row[0] for row in rows], ['0', '1', '2', '3', 'mean', 'stderr'])
        self.assertIn('# seed: 7', metadata)
        summary = self.read_json('disorder.json')
        self.assertEqual(summary['n_ok'], 4)
        self.assertEqual(summary['spec']['seed'], 7)

    def test_seed_decides_the_draws(self):
        runs = {}
        for name, seed in (('a', 7), ('b', 7), ('c', 8)):
            self.call('disorder', out=self.tmp / name, seed=seed, overrides=self.overrides)
            runs[name] = payload_lines(self.tmp / name / 'disorder.csv')
        self.assertEqual(runs['a'], runs['b'])
        self.assertNotEqual(runs['a'], runs['c'])


class G2CommandTests(CommandTestCase):
    def test_dark_cavity_is_masked(self):
        with self.assertLogs('observables.g2', 'WARNING'):
            self.call('g2', overrides=QUIET + ['cavity={}', 'g2.tau_max=0.01', 'g2.n_tau=3'])
        _, header, rows = self.read_csv('g2.csv')
        self.assertEqual(header, ['tau_t', 'g2', 'masked'])
        self.assertEqual([row[1:] for row in rows], [['missing', 'true']] * 3)
        summary = self.read_json('g2.json')
        self.assertIsNone(summary['g2_at_zero'])
        self.assertIsNone(summary['g2_direct'])
        self.assertEqual(summary['masked'], 3)


class ReproduceCommandTests(CommandTestCase):
    def test_failed_check_exits_with_two(self):
        checks = [Check('ok', 1.0, '>= 0', True), Check('bad', 0.1, '>= 0.9', False)]
        with mock.patch('cli.management.commands.reproduce.run_recipes', return_value=checks):
            returncode, payload = self.call_failing('reproduce')
        self.assertEqual(returncode, 2)
        self.assertEqual(payload['details']['failed'], ['bad'])
        self.assertEqual(self.read_json('reproduce.json')['failed'], ['bad'])

    @tag('slow')
    def test_superradiant_recipe(self):
        stdout = self.call('reproduce', only=['superradiant'])
        self.assertIn('PASS', stdout)
        self.assertEqual(self.read_json('reproduce.json')['failed'], [])
