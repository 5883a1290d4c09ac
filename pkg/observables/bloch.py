"""
Bloch-like vectors of the {G, j} sub-density matrix.

The sub-matrix is not renormalized, so a shrinking vector shows both
decoherence and population leaking to the other dressed states.
"""
from dataclasses import dataclass

import numpy as np
from rest_framework.exceptions import ValidationError

from dynamics.simulation import dressed_emitter_states
from qalgebra.spaces import emitter_block

BLOCH_TARGETS = ('+', '-', 'X')


@dataclass(frozen=True)
class BlochVector:
    target: str
    components: tuple

    @property
    def norm(self):
        return float(np.linalg.norm(self.components))


def _components(block, target, basis):
    g, j = basis.index('G'), basis.index(target)
    coherence = block[g, j]
    return (2.0 * coherence.real, 2.0 * coherence.imag, (block[j, j] - block[g, g]).real)


def bloch_vector(rho, target, basis, coordinates='bare'):
    """a_j = (2 Re rho_Gj, 2 Im rho_Gj, rho_jj - rho_GG) with the cavity traced out.

    ``coordinates`` says whether ``rho`` is stored in the bare or the
    dressed emitter basis.
    """
    if target not in BLOCH_TARGETS:
        raise ValidationError({'target': [f"must be one of {', '.join(BLOCH_TARGETS)}"]})
    block = emitter_block(rho)
    if coordinates == 'bare':
        block = basis.transform @ block @ basis.transform.conj().T
    return BlochVector(target=target, components=tuple(float(c) for c in _components(block, target, basis)))


def bloch_trajectories(traj, basis, targets=BLOCH_TARGETS):
    """{target: array (n_times, 3)} along a trajectory."""
    blocks = dressed_emitter_states(traj, basis)
    return {
        target: np.array([_components(block, target, basis) for block in blocks])
        for target in targets
    }
