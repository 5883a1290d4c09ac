"""
Rotating-frame Hamiltonian and Lindblad generator assembly.

The generator is kept as constant pieces plus scalar drive coefficients:

    H(t) = H_static + sum_k (f_k(t) V_k + conj(f_k(t)) V_k^dag)

with V = -(exp(i vartheta) s1+ + s2+) for both pulses and f_k from
``drive.pulses.drive_terms``. Dissipation uses the two collective
channels of the rate matrix plus cavity leakage.
"""
import logging
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from collective.couplings import collective_decay, collective_shift, rate_channels
from collective.dressed import (
    DRESSED_TRANSFORM, branch_weights, dressed_basis, mixture_weights, raising_matrix,
)
from drive.pulses import drive_terms
from qalgebra.spaces import (
    EXCITED_PROJECTOR, HilbertSpace, Operator, annihilation, embed, lowering, photon_number_operator,
    raising,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class LindbladModel:
    space: HilbertSpace
    basis: str
    h_static: Operator
    h_drive_ops: tuple
    collapse_ops: tuple
    config: object

    @property
    def pulse(self):
        return self.config.pulse

    @cached_property
    def dressed(self):
        return dressed_basis(self.config.geom, self.pulse.delta1)

    @cached_property
    def cavity_dim(self):
        return self.space.factors[2] if self.space.has_cavity else 1

    @cached_property
    def _heff_static(self):
        decay = sum(rate * (op.matrix.conj().T @ op.matrix) for rate, op in self.collapse_ops)
        return self.h_static.matrix - 0.5j * decay

    @cached_property
    def _jumps(self):
        return [(rate, op.matrix, op.matrix.conj().T) for rate, op in self.collapse_ops if rate > 0]

    def coefficients(self, t):
        terms = drive_terms(self.pulse, t)
        return [terms[which - 1] for _, which in self.h_drive_ops]

    def drive_matrix(self, t):
        matrix = np.zeros_like(self._heff_static)
        if self.pulse.is_off():
            return matrix
        for (op, _), coefficient in zip(self.h_drive_ops, self.coefficients(t)):
            if coefficient != 0:
                matrix = matrix + coefficient * op.matrix + np.conj(coefficient) * op.matrix.conj().T
        return matrix

    def hamiltonian(self, t=None):
        if t is None:
            return np.array(self.h_static.matrix)
        return self.h_static.matrix + self.drive_matrix(t)

    def effective_hamiltonian(self, t=None):
        if t is None:
            return self._heff_static
        return self._heff_static + self.drive_matrix(t)

    def rhs(self, t, y):
        """d vec(rho)/dt for the row-major vectorized state."""
        n = self.space.total_dim
        rho = y.reshape(n, n)
        heff = self.effective_hamiltonian(t)
        drho = -1j * (heff @ rho - rho @ heff.conj().T)
        for rate, jump, jump_dag in self._jumps:
            drho += rate * (jump @ rho @ jump_dag)
        return drho.reshape(-1)

    def liouvillian(self, t=None):
        """Superoperator acting on row-major vec(rho)."""
        n = self.space.total_dim
        identity = np.eye(n)
        heff = self.effective_hamiltonian(t)
        generator = -1j * (np.kron(heff, identity) - np.kron(identity, heff.conj()))
        for rate, jump, _ in self._jumps:
            generator += rate * np.kron(jump, jump.conj())
        return generator

    def drive_window(self):
        """(start, end) of the pulse support, or None when both areas are zero."""
        if self.pulse.is_off():
            return None
        return self.pulse.window()

    def is_driven(self, t):
        window = self.drive_window()
        return window is not None and window[0] <= t < window[1]

    def max_step(self, options):
        """Step cap inside the drive window."""
        sigma = min(self.pulse.sigma1, self.pulse.sigma2)
        return min(sigma / options.steps_per_sigma, self.pulse.beat_period() / options.steps_per_beat)

    def to_dressed(self, matrix):
        """Express a full-space matrix in dressed emitter coordinates."""
        if self.basis == 'dressed':
            return np.asarray(matrix)
        return self.dressed.to_dressed(matrix, self.cavity_dim)

    def from_dressed(self, matrix):
        if self.basis == 'dressed':
            return np.asarray(matrix)
        return self.dressed.to_bare(matrix, self.cavity_dim)

    def photon_number(self):
        return photon_number_operator(self.space)

    def cavity_annihilation(self):
        return embed(annihilation(self.space.n_fock), 2, self.space)


def _bare_parts(cfg, space):
    geom, pulse = cfg.geom, cfg.pulse
    omega12 = collective_shift(geom)
    s_plus = [raising(i, space) for i in (0, 1)]
    s_minus = [lowering(i, space) for i in (0, 1)]

    static = np.zeros((space.total_dim, space.total_dim), dtype=complex)
    for emitter, shift in enumerate(cfg.site_shifts):
        static -= (pulse.delta1 + shift) * embed(EXCITED_PROJECTOR, emitter, space).matrix
    static += omega12 * (s_plus[0].matrix @ s_minus[1].matrix + s_plus[1].matrix @ s_minus[0].matrix)

    collapse = []
    for rate, (w1, w2) in rate_channels(geom):
        collapse.append((rate, Operator(space, w1 * s_minus[0].matrix + w2 * s_minus[1].matrix)))

    if cfg.cavity is not None:
        cavity = cfg.cavity
        a = embed(annihilation(cavity.n_fock), 2, space).matrix
        static -= cavity.delta_c * (a.conj().T @ a)
        coupling = sum(g * (sp.matrix @ a) for g, sp in zip(cavity.couplings, s_plus))
        static += coupling + coupling.conj().T
        collapse.append((cavity.kappa, Operator(space, a)))

    phase1, phase2 = pulse.emitter_phases
    drive = -(np.exp(1j * phase1) * s_plus[0].matrix + np.exp(1j * phase2) * s_plus[1].matrix)
    return static, drive, collapse


def _dressed_parts(cfg, space):
    geom, pulse = cfg.geom, cfg.pulse
    basis = dressed_basis(geom, pulse.delta1)
    cavity_dim = space.factors[2] if space.has_cavity else 1
    identity_c = np.eye(cavity_dim)
    full_transform = np.kron(DRESSED_TRANSFORM, identity_c)

    static = np.kron(basis.energy_matrix(), identity_c)
    if any(cfg.site_shifts):
        shifts = sum(
            shift * np.kron(embed(EXCITED_PROJECTOR, emitter, HilbertSpace.emitters()).matrix, identity_c)
            for emitter, shift in enumerate(cfg.site_shifts)
        )
        static -= full_transform @ shifts @ full_transform.conj().T

    # vartheta enters only through the mixture weights; sqrt(2) undoes the Omega/sqrt(2) rescaling
    phase1, _ = pulse.emitter_phases
    drive = np.kron(raising_matrix(mixture_weights(phase1, np.sqrt(2.0))), identity_c)

    bare_space = HilbertSpace.emitters(None if cfg.cavity is None else cfg.cavity.n_fock)
    collapse = []
    for rate, (w1, w2) in rate_channels(geom):
        bare = w1 * lowering(0, bare_space).matrix + w2 * lowering(1, bare_space).matrix
        collapse.append((rate, Operator(space, full_transform @ bare @ full_transform.conj().T)))

    if cfg.cavity is not None:
        cavity = cfg.cavity
        a_local = annihilation(cavity.n_fock)
        a = np.kron(np.eye(4), a_local)
        static -= cavity.delta_c * (a.conj().T @ a)
        g1, g2 = cavity.couplings
        coupling = np.kron(raising_matrix(branch_weights(g1, g2)), a_local)
        static += coupling + coupling.conj().T
        collapse.append((cavity.kappa, Operator(space, a)))

    return static, drive, collapse


def build_model(cfg):
    """Assemble the generator for ``cfg`` in its configured basis."""
    space = HilbertSpace.emitters(None if cfg.cavity is None else cfg.cavity.n_fock)
    parts = _dressed_parts if cfg.basis == 'dressed' else _bare_parts
    static, drive, collapse = parts(cfg, space)
    h_static = Operator(space, static, hermitian=True)
    drive_op = Operator(space, drive)
    logger.debug(
        "Built %s model: dim=%d omega12=%.6g gamma12=%.6g",
        cfg.basis, space.total_dim, collective_shift(cfg.geom), collective_decay(cfg.geom),
    )
    return LindbladModel(
        space=space,
        basis=cfg.basis,
        h_static=h_static,
        h_drive_ops=((drive_op, 1), (drive_op, 2)),
        collapse_ops=tuple(collapse),
        config=cfg,
    )
