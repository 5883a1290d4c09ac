import numpy as np
from django.test import SimpleTestCase
from rest_framework.exceptions import ValidationError
from scipy.integrate import quad

from drive.pulses import SuperPulseConfig, drive_terms, envelope, pulse_profile, wrap_phase
from drive.units import unit_convert
from dynamics.config import DEFAULT_T_END


class EnvelopeTests(SimpleTestCase):
    def test_unit_peak_normalization(self):
        sigma = 0.01
        cfg = SuperPulseConfig(alpha1=np.sqrt(2 * np.pi) * sigma, sigma1=sigma)
        self.assertAlmostEqual(envelope(cfg, 1, 0.0), 1.0, places=14)

    def test_table_peak_amplitude(self):
        cfg = SuperPulseConfig(alpha1=68.25 * np.pi)
        self.assertAlmostEqual(envelope(cfg, 1, 0.0), 1.4256e4, delta=1.0)

    def test_conventional_tail(self):
        cfg = SuperPulseConfig(alpha1=10 * np.pi, envelope_convention='conventional')
        peak = envelope(cfg, 1, 0.0)
        for t in (-5 * cfg.sigma1, 5 * cfg.sigma1):
            self.assertLess(envelope(cfg, 1, t), 4e-6 * peak)

    def test_verbatim_width_is_wider(self):
        verbatim = SuperPulseConfig(alpha1=10 * np.pi)
        conventional = verbatim.replace(envelope_convention='conventional')
        self.assertAlmostEqual(verbatim.std(1), np.sqrt(2) * conventional.std(1))
        t = 2 * verbatim.sigma1
        self.assertAlmostEqual(envelope(verbatim, 1, t) / envelope(verbatim, 1, 0.0), np.exp(-1.0))

    def test_zero_outside_support(self):
        cfg = SuperPulseConfig(alpha1=20 * np.pi, alpha2=40 * np.pi, tau=0.004)
        start, end = cfg.window()
        self.assertEqual(envelope(cfg, 1, start - 1e-6), 0.0)
        self.assertEqual(envelope(cfg, 2, end + 1e-6), 0.0)

    def test_second_pulse_is_centered_at_tau(self):
        cfg = SuperPulseConfig(alpha1=20 * np.pi, alpha2=40 * np.pi, tau=0.004)
        self.assertAlmostEqual(envelope(cfg, 2, 0.004), cfg.peak(2))

    def test_envelopes_are_even_about_their_centers(self):
        cfg = SuperPulseConfig(alpha1=20 * np.pi, alpha2=40 * np.pi, tau=0.004)
        offsets = np.linspace(0.0, 0.03, 50)
        for which in (1, 2):
            center = cfg.center(which)
            np.testing.assert_allclose(
                envelope(cfg, which, center + offsets), envelope(cfg, which, center - offsets),
                rtol=1e-12, atol=1e-9,
            )

    def test_time_integral_matches_closed_form(self):
        for convention in ('verbatim', 'conventional'):
            cfg = SuperPulseConfig(alpha1=68.25 * np.pi, envelope_convention=convention)
            start, end = cfg.support(1)
            integral, _ = quad(lambda t: envelope(cfg, 1, t), start, end, points=[0.0], limit=200)
            self.assertAlmostEqual(integral / cfg.area(1), 1.0, places=7)
        self.assertAlmostEqual(cfg.area(1), 68.25 * np.pi)

    def test_start_time(self):
        conventional = SuperPulseConfig(envelope_convention='conventional')
        self.assertAlmostEqual(conventional.start_time(), -0.036)
        self.assertAlmostEqual(SuperPulseConfig().start_time(), -0.036 * np.sqrt(2))
        # the wider pulse sets the start, counted in its own standard deviations
        self.assertAlmostEqual(SuperPulseConfig(sigma2=0.008).start_time(), -0.048 * np.sqrt(2))
        # the default preparation end falls inside the verbatim support
        self.assertGreater(SuperPulseConfig().window()[1], DEFAULT_T_END)


class DriveTermTests(SimpleTestCase):
    cfg = SuperPulseConfig(alpha1=68.25 * np.pi, alpha2=59.05 * np.pi)

    def test_vanishes_outside_supports(self):
        f1, f2 = drive_terms(self.cfg, 0.2)
        self.assertLess(abs(f1), 1e-12)
        self.assertLess(abs(f2), 1e-12)

    def test_first_coefficient_is_half_envelope(self):
        f1, _ = drive_terms(self.cfg, 0.003)
        self.assertAlmostEqual(f1, 0.5 * envelope(self.cfg, 1, 0.003))

    def test_modulus_is_phase_independent(self):
        shifted = self.cfg.replace(phi_x=np.pi)
        for t in np.linspace(-0.02, 0.02, 17):
            self.assertAlmostEqual(abs(drive_terms(self.cfg, t)[1]), abs(drive_terms(shifted, t)[1]))

    def test_beat_period(self):
        self.assertAlmostEqual(self.cfg.beat_period(), 8.27e-4, delta=1e-6)

    def test_phase_winds_at_the_beat_frequency(self):
        times = np.linspace(-0.01, 0.01, 4001)
        _, f2 = drive_terms(self.cfg, times)
        phase = np.unwrap(np.angle(f2))
        rate = np.diff(phase) / np.diff(times)
        np.testing.assert_allclose(rate, self.cfg.delta1 - self.cfg.delta2, rtol=1e-6)
        self.assertTrue(np.all(np.diff(phase) > 0))


class ConfigTests(SimpleTestCase):
    def test_collects_every_error(self):
        with self.assertRaises(ValidationError) as caught:
            SuperPulseConfig(sigma1=-1.0, alpha2=-2.0, theta=-np.pi)
        self.assertEqual(set(caught.exception.detail), {'sigma1', 'alpha2', 'theta'})

    def test_wrap_phase(self):
        self.assertAlmostEqual(wrap_phase(-np.pi), np.pi)
        self.assertAlmostEqual(wrap_phase(3 * np.pi / 2), -np.pi / 2)

    def test_pulse_profile_is_normalized(self):
        cfg = SuperPulseConfig(alpha1=20 * np.pi, alpha2=40 * np.pi, tau=0.004)
        profile1, profile2 = pulse_profile(cfg, np.linspace(-0.05, 0.05, 1001))
        self.assertAlmostEqual(profile1.max(), 1.0)
        self.assertAlmostEqual(profile2.max(), 1.0)


class UnitConvertTests(SimpleTestCase):
    def test_table_values(self):
        self.assertAlmostEqual(unit_convert(-5, 'meV'), -7595.58, places=6)
        self.assertAlmostEqual(unit_convert(-10, 'meV'), -15191.16, places=6)
        self.assertAlmostEqual(unit_convert(6, 'ps'), 0.006, places=12)

    def test_unknown_unit(self):
        with self.assertRaises(ValidationError):
            unit_convert(1.0, 'eV')
