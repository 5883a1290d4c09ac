"""
Adaptive integration of the master equation.

The time axis is split at the drive-window edges. Inside the window the
step is capped so the beat phase exp(i (delta1 - delta2) t) stays
resolved; outside it the generator is constant and the solver runs free.
Each segment is checked as soon as the solver hands it back, and
negative eigenvalues at the integrator-noise level are clipped there.
"""
import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from dynamics.config import IntegratorOptions
from qalgebra.spaces import DensityMatrix, emitter_block
from swingup.exceptions import ConfigurationError, IntegrationError, ShapeError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    space: object
    basis: str
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        if times.ndim != 1 or len(times) == 0:
            raise ShapeError("trajectory needs a non-empty time grid")
        if np.any(np.diff(times) <= 0):
            raise ShapeError("trajectory times must be strictly increasing")
        dim = self.space.total_dim
        if self.states.shape != (len(times), dim, dim):
            raise ShapeError("states do not match the time grid", shape=list(self.states.shape))
        object.__setattr__(self, 'times', times)

    def __len__(self):
        return len(self.times)

    def state(self, index):
        return DensityMatrix(self.space, self.states[index])

    def final_state(self):
        return self.state(-1)

    def expectation_series(self, op):
        return np.einsum('ij,tji->t', op.matrix, self.states)

    def emitter_states(self):
        return np.array([emitter_block(self.state(i)) for i in range(len(self))])


def _segments(model, t0, t1):
    """Split [t0, t1] at the drive-window edges; flag the capped pieces."""
    window = model.drive_window()
    if window is None:
        return [(t0, t1, False)]
    edges = sorted({t0, t1, *(edge for edge in window if t0 < edge < t1)})
    return [(a, b, window[0] <= a and b <= window[1]) for a, b in zip(edges[:-1], edges[1:])]


def propagate(model, y0, t0, t1, t_eval=None, options=None, settle=None):
    """Integrate a vectorized operator from t0 to t1.

    ``y0`` need not be a density matrix (regression-theorem states are
    operator-weighted). Returns (times, flat states) at ``t_eval`` plus
    the final point.

    ``settle(times, states)`` runs on every segment as soon as the solver
    returns it; what it returns is stored, and its last row seeds the next
    segment.
    """
    options = options or IntegratorOptions()
    t_eval = np.sort(np.array([] if t_eval is None else t_eval, dtype=float))
    y = np.asarray(y0, dtype=complex).reshape(-1)
    out_times, out_states = [], []
    stats = {'nfev': 0, 'segments': 0}
    if t1 <= t0:
        return np.array([t0]), y[np.newaxis, :], stats

    for start, end, capped in _segments(model, t0, t1):
        inside = t_eval[(t_eval > start) & (t_eval < end)]
        if start == t0 and np.any(t_eval == t0):
            out_times.append(t0)
            out_states.append(y.copy())
        points = np.concatenate([inside, [end]])
        max_step = model.max_step(options) if capped else np.inf
        solution = solve_ivp(
            model.rhs, (start, end), y,
            method=options.method, rtol=options.rtol, atol=options.atol,
            t_eval=points, max_step=max_step,
        )
        if solution.status != 0:
            failed_at = float(solution.t[-1]) if len(solution.t) else start
            raise IntegrationError(f"integrator failed: {solution.message}", time=failed_at)
        stats['nfev'] += solution.nfev
        stats['segments'] += 1
        logger.debug("Segment [%.6g, %.6g] capped=%s nfev=%d", start, end, capped, solution.nfev)
        segment = solution.y.T if settle is None else settle(solution.t, solution.y.T)
        y = segment[-1]
        for t, state in zip(solution.t, segment):
            if t < end or np.any(t_eval == end) or end == t1:
                out_times.append(float(t))
                out_states.append(state)

    times = np.asarray(out_times)
    states = np.asarray(out_states)
    _, unique = np.unique(times, return_index=True)
    return times[unique], states[unique], stats


def _settler(space):
    """Segment hook that checks every state and clips integrator noise below zero."""
    dim = space.total_dim

    def settle(times, flat):
        settled = np.empty_like(flat)
        for index, (t, state) in enumerate(zip(times, flat)):
            rho = DensityMatrix(space, state.reshape(dim, dim)).settled(time=float(t))
            settled[index] = rho.matrix.reshape(-1)
        return settled

    return settle


def evolve(model, rho0, t0, t1, grid=None, options=None):
    """Integrate the master equation and return states on ``grid``.

    ``grid`` defaults to [t0, t1]; t1 is always part of the output.
    """
    if not t0 < t1:
        raise ConfigurationError("evolve needs t0 < t1", t0=t0, t1=t1)
    grid = np.array([t0, t1] if grid is None else grid, dtype=float)
    if grid.min() < t0 or grid.max() > t1:
        raise ConfigurationError("output grid leaves [t0, t1]", t0=t0, t1=t1)
    if rho0.space != model.space:
        raise ShapeError("initial state does not match the model space")
    options = options or IntegratorOptions()
    settle = None
    if options.check_invariants:
        rho0.check(time=float(t0))
        settle = _settler(model.space)

    times, flat, stats = propagate(model, rho0.matrix, t0, t1, t_eval=grid, options=options, settle=settle)
    keep = np.isin(times, grid) | (times == t1)
    times, flat = times[keep], flat[keep]
    dim = model.space.total_dim
    states = flat.reshape(len(times), dim, dim)

    metadata = {
        'basis': model.basis,
        'rtol': options.rtol,
        'atol': options.atol,
        'method': options.method,
        'nfev': stats['nfev'],
        'segments': stats['segments'],
    }
    return Trajectory(times=times, states=states, space=model.space, basis=model.basis, metadata=metadata)
