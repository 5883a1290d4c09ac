import json
import tempfile
from pathlib import Path

import numpy as np
from django.test import SimpleTestCase, override_settings
from rest_framework.exceptions import ValidationError

from cli.config import apply_overrides, load_config, parse_config
from collective.couplings import resonant_cavity_detuning


class ConfigFileTestCase(SimpleTestCase):
    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self._tmp.cleanup)
        self.tmp = Path(self._tmp.name)

    def write(self, document, name='run.json'):
        path = self.tmp / name
        path.write_text(document if isinstance(document, str) else json.dumps(document), encoding='utf-8')
        return path


class ParseConfigTests(ConfigFileTestCase):
    def test_minimal_file_gets_the_fixed_pulse_scheme(self):
        path = self.write({'geometry': {'d_over_lambda': 0.01}, 'pulse': {'alpha1_pi': 68.25, 'alpha2_pi': 59.05}})
        pulse = parse_config(path).system.pulse
        self.assertEqual(pulse.delta1, -7595.58)
        self.assertEqual(pulse.delta2, -15191.16)
        self.assertEqual(pulse.sigma1, 0.006)
        self.assertEqual(pulse.sigma2, 0.006)
        self.assertAlmostEqual(pulse.alpha1, 68.25 * np.pi)

    def test_empty_file_means_all_defaults(self):
        run = parse_config(self.write(''))
        self.assertIsNone(run.system.cavity)
        self.assertEqual(run.system.basis, 'bare')
        self.assertEqual(run.t_end, 0.02)
        self.assertEqual(run.disorder.n_samples, 200)
        self.assertEqual(run.sweep.shape, (64, 64))

    def test_negative_width_is_rejected(self):
        with self.assertRaises(ValidationError) as caught:
            parse_config(self.write({'pulse': {'sigma1': -1}}))
        self.assertEqual(caught.exception.detail['pulse']['sigma1'], ['must be > 0'])

    def test_unknown_keys_are_named(self):
        with self.assertRaises(ValidationError) as caught:
            parse_config(self.write({'pulse': {'alpah1': 3.0}, 'extra': 1}))
        detail = caught.exception.detail
        self.assertEqual(detail['pulse']['alpah1'], ['unknown field'])
        self.assertEqual(detail['extra'], ['unknown field'])

    def test_every_error_is_reported(self):
        with self.assertRaises(ValidationError) as caught:
            parse_config(self.write({
                'pulse': {'sigma1': -1, 'envelope_convention': 'wide'},
                'geometry': {'d_over_lambda': 0.0},
                'basis': 'polar',
            }))
        detail = caught.exception.detail
        self.assertEqual(set(detail['pulse']), {'sigma1', 'envelope_convention'})
        self.assertIn('d_over_lambda', detail['geometry'])
        self.assertIn('basis', detail)

    def test_unit_suffixes(self):
        run = parse_config(self.write({'pulse': {'delta1_mev': -5, 'sigma1_ps': 6, 'tau_ps': 4}}))
        self.assertAlmostEqual(run.system.pulse.delta1, -7595.58)
        self.assertAlmostEqual(run.system.pulse.sigma1, 0.006)
        self.assertAlmostEqual(run.system.pulse.tau, 0.004)

    def test_value_and_suffix_together_is_an_error(self):
        with self.assertRaises(ValidationError) as caught:
            parse_config(self.write({'pulse': {'delta1': -7595.58, 'delta1_mev': -5}}))
        self.assertIn('delta1_mev', caught.exception.detail['pulse'])

    def test_resonant_detuning_shortcut(self):
        run = parse_config(self.write({'cavity': {'delta_c': 'resonant_minus', 'kappa': 500}}))
        expected = resonant_cavity_detuning(run.system.geom, run.system.pulse.delta1, 'minus')
        self.assertEqual(run.system.cavity.delta_c, expected)
        self.assertEqual(run.system.cavity.kappa, 500.0)

    @override_settings(SWINGUP_FOCK_START=3)
    def test_cavity_defaults(self):
        cavity = parse_config(self.write({'cavity': {}})).system.cavity
        self.assertEqual((cavity.g, cavity.kappa, cavity.n_fock), (100.0, 20.0, 3))

    def test_bad_detuning_name(self):
        with self.assertRaises(ValidationError) as caught:
            parse_config(self.write({'cavity': {'delta_c': 'resonant_x'}}))
        self.assertIn('delta_c', caught.exception.detail['cavity'])

    def test_invalid_json(self):
        with self.assertRaises(ValidationError) as caught:
            parse_config(self.write('{"pulse": '))
        self.assertIn('config', caught.exception.detail)

    def test_missing_file(self):
        with self.assertRaises(ValidationError):
            parse_config(self.tmp / 'absent.json')

    def test_canonical_document_parses_to_the_same_run(self):
        first = parse_config(self.write({
            'pulse': {'alpha1_pi': 20, 'alpha2_pi': 40, 'tau_ps': 4, 'theta_pi': 1},
            'cavity': {'delta_c': 'resonant_minus', 'phi2_pi': 1},
            'sweep': {'axis1': {'name': 'tau', 'lo': 0, 'hi': 0.01, 'n_points': 5}},
            'seed': 99,
        }))
        second = parse_config(self.write(first.as_dict(), name='again.json'))
        self.assertEqual(first.canonical_json(), second.canonical_json())
        self.assertEqual(first.system, second.system)
        self.assertEqual(second.disorder.seed, 99)


class OverrideTests(SimpleTestCase):
    def test_dotted_keys_and_json_values(self):
        document = apply_overrides({'pulse': {'alpha1': 1.0}}, ['pulse.alpha2=2.5', 'basis=dressed', 'cavity.g=50'])
        self.assertEqual(document, {'pulse': {'alpha1': 1.0, 'alpha2': 2.5}, 'basis': 'dressed', 'cavity': {'g': 50}})
        run = load_config(document)
        self.assertEqual(run.system.basis, 'dressed')
        self.assertEqual(run.system.cavity.g, 50.0)

    def test_malformed_assignment(self):
        with self.assertRaises(ValidationError):
            apply_overrides({}, ['alpha1'])

    def test_cannot_descend_into_a_value(self):
        with self.assertRaises(ValidationError):
            apply_overrides({'basis': 'bare'}, ['basis.x=1'])
