import numpy as np

from qalgebra.spaces import cavity_annihilation, photon_number_operator
from swingup.exceptions import ConfigurationError

# <a^dag a>^2 below this means there is no light to correlate
EMPTY_CAVITY = 1e-30


def photon_number(traj):
    """Intracavity <a^dag a>(t) along ``traj``."""
    if not traj.space.has_cavity:
        raise ConfigurationError("photon number needs a cavity mode", factors=traj.space.factors)
    return np.real(traj.expectation_series(photon_number_operator(traj.space)))


def normally_ordered_g2(rho):
    """<a^dag a^dag a a> / <a^dag a>^2 for a single state."""
    a = cavity_annihilation(rho.space).matrix
    a_dag = a.conj().T
    number = np.real(np.trace(a_dag @ a @ rho.matrix))
    pairs = np.real(np.trace(a_dag @ a_dag @ a @ a @ rho.matrix))
    if number**2 < EMPTY_CAVITY:
        return float('nan')
    return float(pairs / number**2)
