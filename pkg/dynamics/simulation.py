"""
State-preparation runs: initial states, populations and the Fock-cutoff
escalation loop.
"""
import logging

import numpy as np
from django.conf import settings
from scipy.optimize import curve_fit

from collective.dressed import DRESSED_LABELS
from dynamics.config import DEFAULT_T_END, IntegratorOptions
from dynamics.integrate import evolve
from dynamics.lindblad import build_model
from qalgebra.spaces import GROUND, DensityMatrix, basis_ket, emitter_block, photon_number_operator
from swingup.exceptions import ConfigurationError

logger = logging.getLogger(__name__)

POPULATION_LABELS = ('G', '+', '-', 'X')


def ground_state(model):
    """|G> with the cavity in vacuum."""
    return DensityMatrix.pure(model.space, basis_ket(model.space, GROUND, GROUND))


def dressed_state(model, label):
    """|label> x |vacuum> expressed in the model's basis."""
    cavity_dim = model.cavity_dim
    dressed = np.zeros(4 * cavity_dim, dtype=complex)
    dressed[DRESSED_LABELS.index(label) * cavity_dim] = 1.0
    matrix = model.from_dressed(np.outer(dressed, dressed.conj()))
    return DensityMatrix(model.space, matrix)


def dressed_emitter_states(traj, basis):
    """Emitter 4x4 blocks in dressed coordinates for every time point."""
    blocks = traj.emitter_states()
    if traj.basis == 'dressed':
        return blocks
    return np.einsum('ij,tjk,lk->til', basis.transform, blocks, basis.transform.conj())


def population_series(traj, basis):
    blocks = dressed_emitter_states(traj, basis)
    return {label: blocks[:, basis.index(label), basis.index(label)].real for label in POPULATION_LABELS}


def final_populations(traj, basis):
    """P_G, P_+, P_-, P_X of the last stored state, cavity traced out."""
    block = emitter_block(traj.final_state())
    if traj.basis != 'dressed':
        block = basis.transform @ block @ basis.transform.conj().T
    return {label: float(block[basis.index(label), basis.index(label)].real) for label in POPULATION_LABELS}


def time_grid(pulse, t_end=DEFAULT_T_END, n_points=401, t_start=None):
    start = pulse.start_time() if t_start is None else t_start
    return np.linspace(start, t_end, n_points)


def _run(cfg, grid, options, initial):
    model = build_model(cfg)
    rho0 = initial(model) if callable(initial) else initial
    traj = evolve(model, rho0, grid[0], grid[-1], grid=grid, options=options)
    return model, traj


def simulate(cfg, t_end=DEFAULT_T_END, n_points=401, options=None, initial=ground_state,
             t_start=None, escalate=True, grid=None):
    """Run ``cfg`` from ``initial`` and return (model, trajectory).

    ``grid`` overrides the uniform output grid built from the other
    time arguments.

    With a cavity the run is repeated at n_fock + step until the photon
    number stops moving by more than the tolerance, or the cap is hit.
    """
    options = options or IntegratorOptions()
    if grid is None:
        grid = time_grid(cfg.pulse, t_end=t_end, n_points=n_points, t_start=t_start)
    grid = np.asarray(grid, dtype=float)
    model, traj = _run(cfg, grid, options, initial)
    if cfg.cavity is None or not escalate:
        return model, traj

    history = [cfg.cavity.n_fock]
    while True:
        n_next = cfg.cavity.n_fock + settings.SWINGUP_FOCK_STEP
        if n_next > settings.SWINGUP_FOCK_MAX:
            logger.warning(
                "Photon number not converged at n_fock=%d (cap %d)",
                cfg.cavity.n_fock, settings.SWINGUP_FOCK_MAX,
            )
            converged = False
            break
        finer_cfg = cfg.with_fock(n_next)
        finer_model, finer_traj = _run(finer_cfg, grid, options, initial)
        history.append(n_next)
        coarse = traj.expectation_series(photon_number_operator(model.space)).real
        fine = finer_traj.expectation_series(photon_number_operator(finer_model.space)).real
        change = float(np.max(np.abs(fine - coarse)))
        cfg, model, traj = finer_cfg, finer_model, finer_traj
        if change < settings.SWINGUP_FOCK_TOLERANCE:
            converged = True
            break
        logger.warning("Escalating Fock cutoff: max photon-number change %.3g at n_fock=%d", change, n_next)

    traj.metadata.update({'n_fock': cfg.cavity.n_fock, 'fock_history': history, 'fock_converged': converged})
    return model, traj


def decay_grid(pulse, t_end=DEFAULT_T_END, horizon=1.0, n_prepare=201, n_decay=201):
    """Preparation grid followed by a coarser post-pulse grid; t_end is on it."""
    prepare = time_grid(pulse, t_end=t_end, n_points=n_prepare)
    return np.concatenate([prepare, np.linspace(t_end, t_end + horizon, n_decay)[1:]])


def _exponential(t, amplitude, rate):
    return amplitude * np.exp(-rate * t)


def fit_decay_rate(times, populations, start=None, stop=None):
    """Least-squares rate of amplitude * exp(-rate * (t - start)) on [start, stop]."""
    times = np.asarray(times, dtype=float)
    populations = np.asarray(populations, dtype=float)
    start = times[0] if start is None else start
    stop = times[-1] if stop is None else stop
    inside = (times >= start) & (times <= stop)
    if inside.sum() < 3:
        raise ConfigurationError("decay fit needs at least three samples", start=start, stop=stop)
    t, p = times[inside] - start, populations[inside]
    if p[0] <= 0:
        raise ConfigurationError("population is empty at the start of the fit", start=start)
    guess_rate = max(np.log(p[0] / max(p[-1], 1e-300)) / max(t[-1], 1e-300), 0.0)
    (amplitude, rate), _ = curve_fit(_exponential, t, p, p0=(p[0], guess_rate), maxfev=10000)
    return float(rate), float(amplitude)


def populations_at(traj, basis, t):
    """Dressed populations at the stored time closest to ``t``."""
    index = int(np.argmin(np.abs(traj.times - t)))
    series = population_series(traj, basis)
    return {label: float(values[index]) for label, values in series.items()}
