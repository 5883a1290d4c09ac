"""
Second-order cavity correlation g2(tau_f, tau_t) after state preparation.
"""
import logging
from dataclasses import dataclass

import numpy as np

from observables.correlations import evolve_operator, state_at
from qalgebra.spaces import cavity_annihilation
from swingup.exceptions import ConfigurationError

logger = logging.getLogger(__name__)

# End of the pulses in the preparation runs
DEFAULT_TAU_F = 0.02

# Denominators below this are not divided through
DENOMINATOR_FLOOR = 1e-12


@dataclass(frozen=True, eq=False)
class G2Result:
    tau_f: float
    tau_t_grid: np.ndarray
    values: np.ndarray
    floor_mask: np.ndarray
    numerator: np.ndarray
    denominator: np.ndarray

    @property
    def at_zero(self):
        return float(self.values[0]) if self.tau_t_grid[0] == 0 else None

    def rows(self):
        """(tau_t, g2, masked) rows; masked entries carry NaN."""
        return [(float(tau), float(value), bool(mask))
                for tau, value, mask in zip(self.tau_t_grid, self.values, self.floor_mask)]


def g2_function(model, traj, tau_f=DEFAULT_TAU_F, tau_t_grid=None, options=None):
    """Normalized photon-pair correlation with the first detection at ``tau_f``.

    The numerator propagates the doubly collapsed state a rho a^dag; the
    denominator uses the one-time photon numbers at tau_f and tau_f + tau_t.
    """
    if not model.space.has_cavity:
        raise ConfigurationError("g2 needs a cavity mode", factors=model.space.factors)
    tau_t_grid = np.linspace(0.0, 0.1, 201) if tau_t_grid is None else np.asarray(tau_t_grid, dtype=float)
    rho = state_at(model, traj, tau_f, options=options)

    a = cavity_annihilation(model.space).matrix
    number = a.conj().T @ a
    collapsed = a @ rho.matrix @ a.conj().T
    paired = evolve_operator(model, collapsed, tau_f, tau_t_grid, time_dependent=True, options=options)
    evolved = evolve_operator(model, rho.matrix, tau_f, tau_t_grid, time_dependent=True, options=options)

    numerator = np.real(np.einsum('ij,tji->t', number, paired))
    later = np.real(np.einsum('ij,tji->t', number, evolved))
    denominator = np.real(np.trace(number @ rho.matrix)) * later
    floor_mask = denominator < DENOMINATOR_FLOOR
    values = np.full_like(numerator, np.nan)
    values[~floor_mask] = numerator[~floor_mask] / denominator[~floor_mask]
    if floor_mask.any():
        logger.warning("g2 denominator below %.0e at %d of %d delays", DENOMINATOR_FLOOR,
                       int(floor_mask.sum()), len(floor_mask))
    return G2Result(
        tau_f=float(tau_f),
        tau_t_grid=tau_t_grid,
        values=values,
        floor_mask=floor_mask,
        numerator=numerator,
        denominator=denominator,
    )
