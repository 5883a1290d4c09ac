import numpy as np
from django.test import SimpleTestCase
from rest_framework.exceptions import ValidationError

from collective.couplings import Geometry, collective_decay, resonant_cavity_detuning
from collective.dressed import DRESSED_LABELS, dressed_basis
from drive.pulses import SuperPulseConfig
from dynamics.config import CavityConfig, IntegratorOptions, SystemConfig
from dynamics.integrate import _segments
from dynamics.lindblad import build_model


def _index(label, photons, cavity_dim):
    return DRESSED_LABELS.index(label) * cavity_dim + photons


class BuildModelTests(SimpleTestCase):
    pulse = SuperPulseConfig(alpha1=68.25 * np.pi, alpha2=59.05 * np.pi, theta=np.pi / 3)

    def test_undriven_drift_spectrum_is_dressed(self):
        geom = Geometry(d_over_lambda=0.01)
        model = build_model(SystemConfig(geom=geom, pulse=SuperPulseConfig()))
        basis = dressed_basis(geom, model.pulse.delta1)
        eigenvalues = np.linalg.eigvalsh(model.hamiltonian())
        np.testing.assert_allclose(eigenvalues, sorted(basis.energies.values()), atol=1e-9)

    def test_phase_free_cavity_skips_dark_branch(self):
        cavity = CavityConfig(n_fock=3)
        for basis in ('bare', 'dressed'):
            model = build_model(SystemConfig(cavity=cavity, basis=basis))
            h = model.to_dressed(model.hamiltonian())
            for n in range(cavity.n_fock):
                self.assertLess(abs(h[_index('-', n, 4), _index('G', n + 1, 4)]), 1e-9)
                self.assertLess(abs(h[_index('X', n, 4), _index('-', n + 1, 4)]), 1e-9)
                self.assertGreater(abs(h[_index('+', n, 4), _index('G', n + 1, 4)]), 1.0)

    def test_quarter_phase_couples_both_branches_equally(self):
        cavity = CavityConfig(n_fock=3, phi2=np.pi / 2)
        model = build_model(SystemConfig(cavity=cavity))
        h = model.to_dressed(model.hamiltonian())
        for n in range(cavity.n_fock):
            plus = abs(h[_index('+', n + 1, 4), _index('X', n, 4)])
            minus = abs(h[_index('-', n + 1, 4), _index('X', n, 4)])
            self.assertAlmostEqual(plus, minus, places=9)
            self.assertGreater(plus, 0.0)

    def test_static_hamiltonian_is_hermitian(self):
        cfg = SystemConfig(cavity=CavityConfig(phi1=0.4, phi2=-1.1), site_shifts=(3.0, -2.0))
        for basis in ('bare', 'dressed'):
            model = build_model(cfg.replace(basis=basis))
            self.assertTrue(model.h_static.hermitian)

    def test_bare_and_dressed_generators_agree(self):
        cfg = SystemConfig(
            pulse=self.pulse,
            cavity=CavityConfig(n_fock=2, phi2=np.pi / 2),
            site_shifts=(1.5, -0.5),
        )
        bare = build_model(cfg)
        dressed = build_model(cfg.replace(basis='dressed'))
        for t in (-0.01, 0.0, 0.0037):
            np.testing.assert_allclose(
                bare.to_dressed(bare.hamiltonian(t)), dressed.hamiltonian(t), atol=1e-9,
            )
        for (rate_b, op_b), (rate_d, op_d) in zip(bare.collapse_ops, dressed.collapse_ops):
            self.assertEqual(rate_b, rate_d)
            np.testing.assert_allclose(bare.to_dressed(op_b.matrix), op_d.matrix, atol=1e-12)

    def test_collapse_rates_are_collective(self):
        geom = Geometry(d_over_lambda=0.05)
        model = build_model(SystemConfig(geom=geom, cavity=CavityConfig(kappa=500.0)))
        rates = [rate for rate, _ in model.collapse_ops]
        gamma12 = collective_decay(geom)
        np.testing.assert_allclose(rates, [1 + gamma12, 1 - gamma12, 500.0])

    def test_liouvillian_matches_rhs(self):
        rng = np.random.default_rng(7)
        for pulse, t in ((SuperPulseConfig(), None), (self.pulse, 0.001)):
            model = build_model(SystemConfig(pulse=pulse, cavity=CavityConfig(n_fock=2)))
            n = model.space.total_dim
            y = (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))).reshape(-1)
            np.testing.assert_allclose(model.liouvillian(t) @ y, model.rhs(t or 0.0, y), rtol=1e-10, atol=1e-6)

    def test_resonant_cavity_sits_on_the_target_level(self):
        geom = Geometry(d_over_lambda=0.01)
        basis = dressed_basis(geom, SuperPulseConfig().delta1)
        delta_c = resonant_cavity_detuning(geom, SuperPulseConfig().delta1, 'plus')
        model = build_model(SystemConfig(geom=geom, cavity=CavityConfig(g=1e-6, n_fock=2, delta_c=delta_c)))
        h = model.to_dressed(model.hamiltonian())
        # |+,0> and |G,1> are degenerate
        self.assertAlmostEqual(
            h[_index('+', 0, 3), _index('+', 0, 3)].real, h[_index('G', 1, 3), _index('G', 1, 3)].real, places=6,
        )
        self.assertAlmostEqual(h[_index('+', 0, 3), _index('+', 0, 3)].real, basis.energies['+'], places=6)

    def test_invalid_cavity_names_fields(self):
        with self.assertRaises(ValidationError) as caught:
            CavityConfig(g=0.0, kappa=-1.0, n_fock=1)
        self.assertEqual(set(caught.exception.detail), {'g', 'kappa', 'n_fock'})

    def test_unknown_basis(self):
        with self.assertRaises(ValidationError):
            SystemConfig(basis='polaron')


class StepControlTests(SimpleTestCase):
    def test_step_cap_resolves_beat_and_width(self):
        cfg = SystemConfig(pulse=SuperPulseConfig(alpha1=20 * np.pi))
        model = build_model(cfg)
        expected = min(0.006 / 50, model.pulse.beat_period() / 20)
        self.assertAlmostEqual(model.max_step(IntegratorOptions()), expected)

    def test_segments_split_at_the_drive_window(self):
        pulse = SuperPulseConfig(alpha1=20 * np.pi, alpha2=40 * np.pi, tau=0.004)
        model = build_model(SystemConfig(pulse=pulse))
        start, end = pulse.window()
        pieces = _segments(model, start - 0.01, end + 0.5)
        self.assertEqual(pieces, [(start - 0.01, start, False), (start, end, True), (end, end + 0.5, False)])

    def test_undriven_model_is_one_segment(self):
        model = build_model(SystemConfig())
        self.assertIsNone(model.drive_window())
        self.assertEqual(_segments(model, 0.0, 1.0), [(0.0, 1.0, False)])
