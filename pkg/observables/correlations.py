"""
Two-time correlations through the quantum regression theorem.

    <A(t) B(t + tau)> = Tr[B V(t + tau, t)[rho(t) A]]

V is the same generator that moves the density matrix. After the drive
window it is constant, so it is diagonalized once per model; while a
pulse is still on, the operator-weighted state is integrated instead.
"""
import logging
from functools import lru_cache

import numpy as np
from scipy import linalg
from scipy.sparse.linalg import expm_multiply

from dynamics.config import IntegratorOptions
from dynamics.integrate import evolve, propagate
from qalgebra.spaces import DensityMatrix
from swingup.exceptions import ConfigurationError, ShapeError

logger = logging.getLogger(__name__)

# Above this the eigenvector basis of the generator is not trusted
CONDITION_LIMIT = 1e8


class StaticPropagator:
    """exp(L tau) for a constant Liouvillian L."""

    def __init__(self, liouvillian):
        self.liouvillian = np.asarray(liouvillian)
        eigenvalues, vectors = linalg.eig(self.liouvillian)
        condition = np.linalg.cond(vectors)
        self.diagonal = bool(np.isfinite(condition) and condition < CONDITION_LIMIT)
        if self.diagonal:
            self.eigenvalues = eigenvalues
            self.vectors = vectors
            self._lu = linalg.lu_factor(vectors)
        else:
            logger.warning("Liouvillian eigenbasis condition %.3g; falling back to expm_multiply", condition)

    def apply(self, y0, taus):
        """Rows are exp(L tau) y0 for each tau."""
        y0 = np.asarray(y0, dtype=complex).reshape(-1)
        taus = np.asarray(taus, dtype=float)
        if self.diagonal:
            coefficients = linalg.lu_solve(self._lu, y0)
            return (np.exp(np.outer(taus, self.eigenvalues)) * coefficients) @ self.vectors.T
        return np.array([y0 if tau == 0 else expm_multiply(self.liouvillian * tau, y0) for tau in taus])

    def expectations(self, y0, observable, taus):
        """Tr[observable exp(L tau)[y0]] without forming the propagated states."""
        taus = np.asarray(taus, dtype=float)
        row = np.asarray(observable).T.reshape(-1)
        if not self.diagonal:
            return self.apply(y0, taus) @ row
        coefficients = linalg.lu_solve(self._lu, np.asarray(y0, dtype=complex).reshape(-1))
        weights = (row @ self.vectors) * coefficients
        return np.exp(np.outer(taus, self.eigenvalues)) @ weights


@lru_cache(maxsize=8)
def static_propagator(model):
    return StaticPropagator(model.liouvillian())


def _check_taus(tau_grid):
    taus = np.asarray(tau_grid, dtype=float)
    if taus.ndim != 1 or len(taus) == 0:
        raise ShapeError("delay grid must be a non-empty vector")
    if taus[0] < 0 or np.any(np.diff(taus) <= 0):
        raise ShapeError("delays must be non-negative and strictly increasing")
    return taus


def drive_ends(model):
    window = model.drive_window()
    return -np.inf if window is None else window[1]


def evolve_operator(model, y0, t, tau_grid, time_dependent=False, options=None):
    """States V(t + tau, t)[y0] for every delay, shape (n_tau, dim, dim)."""
    taus = _check_taus(tau_grid)
    dim = model.space.total_dim
    y0 = np.asarray(y0, dtype=complex).reshape(-1)
    switch = drive_ends(model)
    if t < switch and not time_dependent:
        raise ConfigurationError(
            "drive is still on; pass time_dependent=True to integrate through it", t=t, drive_ends=switch,
        )

    targets = t + taus
    out = np.empty((len(taus), y0.size), dtype=complex)
    done = taus == 0
    out[done] = y0
    start, y = t, y0

    if t < switch:
        stop = min(switch, targets[-1])
        early = ~done & (targets <= stop)
        times, states, _ = propagate(model, y, t, stop, t_eval=targets[early], options=options)
        out[early] = states[np.searchsorted(times, targets[early])]
        done |= early
        start, y = stop, states[-1]

    if not done.all():
        out[~done] = static_propagator(model).apply(y, targets[~done] - start)
    return out.reshape(len(taus), dim, dim)


def qrt_correlator(model, rho_t, a_op, b_op, tau_grid, t, time_dependent=False, options=None):
    """<A(t) B(t + tau)> on ``tau_grid`` for the state ``rho_t`` at time ``t``."""
    if rho_t.space != model.space:
        raise ShapeError("state does not match the model space")
    weighted = rho_t.matrix @ a_op.matrix
    taus = _check_taus(tau_grid)
    if t >= drive_ends(model):
        values = static_propagator(model).expectations(weighted, b_op.matrix, taus)
        values[taus == 0] = np.trace(b_op.matrix @ weighted)
        return values
    states = evolve_operator(model, weighted, t, taus, time_dependent=time_dependent, options=options)
    return np.einsum('ij,tji->t', b_op.matrix, states)


def states_at(model, traj, times, options=None):
    """Density matrices at ``times``, re-integrated from the trajectory where needed."""
    times = np.asarray(times, dtype=float)
    if times[0] < traj.times[0] - 1e-12 or times[-1] > traj.times[-1] + 1e-12:
        raise ConfigurationError(
            "requested times leave the trajectory",
            requested=[float(times[0]), float(times[-1])],
            available=[float(traj.times[0]), float(traj.times[-1])],
        )
    index = np.searchsorted(traj.times, times)
    stored = (index < len(traj)) & np.isclose(traj.times[np.minimum(index, len(traj) - 1)], times, rtol=0, atol=1e-12)
    if stored.all():
        return traj.states[index]

    anchor = max(0, int(np.searchsorted(traj.times, times[0], side='right')) - 1)
    t_anchor = traj.times[anchor]
    grid = np.unique(np.concatenate([[t_anchor], times]))
    if len(grid) == 1:
        return traj.states[[anchor] * len(times)]
    logger.debug("Re-integrating %d states from t=%.6g", len(times), t_anchor)
    rerun = evolve(model, traj.state(anchor), t_anchor, grid[-1], grid=grid, options=options or IntegratorOptions())
    return rerun.states[np.searchsorted(rerun.times, times)]


def state_at(model, traj, t, options=None):
    return DensityMatrix(model.space, states_at(model, traj, [t], options=options)[0])
