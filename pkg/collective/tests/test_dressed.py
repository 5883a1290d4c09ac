import numpy as np
from django.test import SimpleTestCase

from collective.couplings import Geometry, collective_shift
from collective.dressed import (
    DRESSED_TRANSFORM, branch_weights, dipole_hamiltonian, dressed_basis, dressed_energies,
    mixture_weights, raising_matrix,
)
from qalgebra.spaces import SIGMA_PLUS, HilbertSpace, embed

DELTA1 = -7595.58


class DressedBasisTests(SimpleTestCase):
    def test_transform_is_unitary(self):
        np.testing.assert_allclose(DRESSED_TRANSFORM @ DRESSED_TRANSFORM.conj().T, np.eye(4), atol=1e-12)

    def test_degenerate_manifold_without_exchange(self):
        energies = dressed_energies(0.0, DELTA1)
        self.assertEqual(energies['+'], energies['-'])
        self.assertEqual(energies['+'], -DELTA1)

    def test_table_detuning_energies(self):
        basis = dressed_basis(Geometry(d_over_lambda=0.01), DELTA1)
        self.assertAlmostEqual(basis.energies['+'], 10613.3, delta=0.5)
        self.assertAlmostEqual(basis.energies['-'], 4577.9, delta=0.5)
        self.assertAlmostEqual(basis.energies['X'], 2 * 7595.58)
        self.assertAlmostEqual(basis.energies['+'] - basis.energies['-'], 2 * basis.omega12, delta=1e-9)

    def test_decay_rates_sum_to_twice_gamma(self):
        for d in (0.01, 0.1, 0.33):
            basis = dressed_basis(Geometry(d_over_lambda=d), DELTA1)
            self.assertAlmostEqual(basis.decay_rates['+'] + basis.decay_rates['-'], 2.0, places=14)

    def test_transform_diagonalizes_dipole_hamiltonian(self):
        geom = Geometry(d_over_lambda=0.01)
        basis = dressed_basis(geom, DELTA1)
        bare = dipole_hamiltonian(collective_shift(geom), DELTA1)
        dressed = basis.to_dressed(bare)
        np.testing.assert_allclose(dressed, basis.energy_matrix(), atol=1e-10)
        np.testing.assert_allclose(basis.to_bare(dressed), bare, atol=1e-12)

    def test_eigenvalues_match_numerical_diagonalization(self):
        geom = Geometry(d_over_lambda=0.05)
        basis = dressed_basis(geom, DELTA1)
        eigenvalues = np.linalg.eigvalsh(dipole_hamiltonian(basis.omega12, DELTA1))
        np.testing.assert_allclose(sorted(basis.energies.values()), eigenvalues, atol=1e-9)


class MixtureWeightTests(SimpleTestCase):
    envelope = 2.5

    def test_symmetric_drive(self):
        weights = mixture_weights(0.0, self.envelope)
        self.assertAlmostEqual(weights.x_plus, -self.envelope)
        self.assertAlmostEqual(weights.plus_g, -self.envelope)
        self.assertAlmostEqual(weights.x_minus, 0.0)
        self.assertAlmostEqual(weights.minus_g, 0.0)

    def test_antisymmetric_drive(self):
        weights = mixture_weights(np.pi, self.envelope)
        self.assertAlmostEqual(weights.x_plus, 0.0)
        self.assertAlmostEqual(weights.x_minus, self.envelope)
        self.assertAlmostEqual(weights.plus_g, 0.0)
        self.assertAlmostEqual(weights.minus_g, -self.envelope)

    def test_quarter_phase_has_equal_magnitudes(self):
        weights = mixture_weights(np.pi / 2, self.envelope)
        for weight in weights:
            self.assertAlmostEqual(abs(weight), self.envelope / np.sqrt(2))
        self.assertAlmostEqual(weights.x_plus, -self.envelope / 2 * (1j + 1))
        self.assertAlmostEqual(weights.minus_g, -self.envelope / 2 * (-1j + 1))

    def test_branch_weights_are_the_dressed_raising_operator(self):
        space = HilbertSpace.emitters()
        rng = np.random.default_rng(2)
        for phase1, phase2 in rng.uniform(-np.pi, np.pi, size=(10, 2)):
            w1, w2 = np.exp(1j * phase1), np.exp(1j * phase2)
            bare = w1 * embed(SIGMA_PLUS, 0, space).matrix + w2 * embed(SIGMA_PLUS, 1, space).matrix
            dressed = DRESSED_TRANSFORM @ bare @ DRESSED_TRANSFORM.T
            np.testing.assert_allclose(dressed, raising_matrix(branch_weights(w1, w2)), atol=1e-14)
