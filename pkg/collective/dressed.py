"""
Dressed-state basis {X, +, -, G} of the dipole-dipole Hamiltonian.

|+-> = (|g,e> +- |e,g>)/sqrt(2). Rows of ``DRESSED_TRANSFORM`` are the
dressed states written in the bare order |e,e>, |e,g>, |g,e>, |g,g>, so
a bare matrix M maps to T M T^dag.
"""
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from collective.couplings import collective_decay, collective_shift

DRESSED_LABELS = ('X', '+', '-', 'G')

_HALF = 1.0 / np.sqrt(2.0)

DRESSED_TRANSFORM = np.array([
    [1.0, 0.0, 0.0, 0.0],
    [0.0, _HALF, _HALF, 0.0],
    [0.0, -_HALF, _HALF, 0.0],
    [0.0, 0.0, 0.0, 1.0],
])
DRESSED_TRANSFORM.setflags(write=False)


class MixtureWeights(NamedTuple):
    """Upper-triangle drive entries h_{X,+}, h_{X,-}, h_{+,G}, h_{-,G}."""

    x_plus: complex
    x_minus: complex
    plus_g: complex
    minus_g: complex


@dataclass(frozen=True, eq=False)
class DressedBasis:
    transform: np.ndarray
    energies: dict
    decay_rates: dict
    omega12: float
    gamma12: float

    @staticmethod
    def index(label):
        return DRESSED_LABELS.index(label)

    def energy_matrix(self):
        return np.diag([self.energies[label] for label in DRESSED_LABELS]).astype(complex)

    def projector(self, label):
        """|j><j| in dressed coordinates."""
        projector = np.zeros((4, 4), dtype=complex)
        projector[self.index(label), self.index(label)] = 1.0
        return projector

    def bare_projector(self, label):
        return self.transform.conj().T @ self.projector(label) @ self.transform

    def to_dressed(self, matrix, cavity_dim=1):
        full = np.kron(self.transform, np.eye(cavity_dim))
        return full @ matrix @ full.conj().T

    def to_bare(self, matrix, cavity_dim=1):
        full = np.kron(self.transform, np.eye(cavity_dim))
        return full.conj().T @ matrix @ full


def dressed_energies(omega12, delta1):
    return {'X': -2.0 * delta1, '+': -delta1 + omega12, '-': -delta1 - omega12, 'G': 0.0}


def dressed_basis(geom, delta1):
    omega12 = collective_shift(geom)
    gamma12 = collective_decay(geom)
    return DressedBasis(
        transform=DRESSED_TRANSFORM,
        energies=dressed_energies(omega12, delta1),
        decay_rates={'+': geom.gamma + gamma12, '-': geom.gamma - gamma12},
        omega12=omega12,
        gamma12=gamma12,
    )


def dipole_hamiltonian(omega12, delta1):
    """Bare-basis H_DD in the frame rotating at the first pulse frequency."""
    return np.array([
        [-2.0 * delta1, 0.0, 0.0, 0.0],
        [0.0, -delta1, omega12, 0.0],
        [0.0, omega12, -delta1, 0.0],
        [0.0, 0.0, 0.0, 0.0],
    ], dtype=complex)


def branch_weights(weight1, weight2):
    """Dressed image of ``weight1 * s1+ + weight2 * s2+``.

    Both the SUPER drive (weights e^{i vartheta}, 1) and the cavity
    coupling (weights e^{i phi_1}, e^{i phi_2}) take this shape.
    """
    return MixtureWeights(
        x_plus=_HALF * (weight1 + weight2),
        x_minus=_HALF * (weight1 - weight2),
        plus_g=_HALF * (weight1 + weight2),
        minus_g=_HALF * (weight2 - weight1),
    )


def mixture_weights(theta_phase, envelope_value):
    """Drive entries of the dressed Hamiltonian for relative phase vartheta.

    ``envelope_value`` is the rescaled envelope Omega_S / sqrt(2).
    """
    weights = branch_weights(np.exp(1j * theta_phase), 1.0)
    scale = -envelope_value / _HALF / 2.0
    return MixtureWeights(*(scale * w for w in weights))


def raising_matrix(weights):
    """4x4 dressed matrix with ``weights`` in the upper triangle."""
    matrix = np.zeros((4, 4), dtype=complex)
    x, plus, minus, ground = (DressedBasis.index(label) for label in DRESSED_LABELS)
    matrix[x, plus] = weights.x_plus
    matrix[x, minus] = weights.x_minus
    matrix[plus, ground] = weights.plus_g
    matrix[minus, ground] = weights.minus_g
    return matrix
