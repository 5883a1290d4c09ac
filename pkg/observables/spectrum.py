"""
Time-integrated cavity emission spectrum.

    S(w) = 2 Re int_{t0}^{t0+T'} dt int_0^{t0+T'-t} dtau e^{-i w tau} <a^dag(t) a(t + tau)>

The correlator oscillates at the cavity frequency of the rotating frame,
so it is demodulated by delta_c before the transform and the spectrum
is evaluated directly on w - delta_c.
"""
import logging
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.signal import find_peaks

from dynamics.lindblad import build_model
from observables.correlations import qrt_correlator, states_at
from qalgebra.spaces import DensityMatrix, cavity_annihilation
from swingup.exceptions import ConfigurationError
from swingup.workers import dispatch, resolve_jobs

logger = logging.getLogger(__name__)

# Gamma (T - t0) from the start of the drive
DEFAULT_WINDOW = 0.6
DEFAULT_OUTER_POINTS = 512
PEAK_SHIFT_TOLERANCE = 0.5


def default_frequencies():
    return np.linspace(-300.0, 300.0, 1201)


@dataclass(frozen=True, eq=False)
class SpectrumResult:
    frequencies: np.ndarray
    values: np.ndarray
    window: tuple
    raw: np.ndarray
    negative_excursion: float
    n_outer: int

    def peaks(self, min_height=0.5):
        """Frequencies of local maxima above ``min_height`` of the unit peak."""
        padded = np.concatenate([[-np.inf], self.values, [-np.inf]])
        found, _ = find_peaks(padded, height=min_height)
        return self.frequencies[found - 1]

    def rows(self):
        return list(zip(self.frequencies.tolist(), self.values.tolist()))


def trapezoid_weights(n, step):
    weights = np.full(n, step)
    weights[[0, -1]] *= 0.5
    return weights if n > 1 else np.zeros(1)


@lru_cache(maxsize=4)
def _model_for(cfg):
    return build_model(cfg)


def inner_transforms(payload):
    """Inner tau integrals for a block of outer times."""
    model = _model_for(payload['config'])
    a = cavity_annihilation(model.space)
    a_dag = a.dag()
    outer = payload['outer']
    frequencies = payload['frequencies']
    delta_c = model.config.cavity.delta_c
    step = outer[1] - outer[0]
    rows = []
    for index, state in zip(payload['indices'], payload['states']):
        taus = outer[index:] - outer[index]
        rho = DensityMatrix(model.space, state)
        correlator = qrt_correlator(model, rho, a_dag, a, taus, t=outer[index], time_dependent=True,
                                    options=payload['options'])
        weighted = trapezoid_weights(len(taus), step) * correlator * np.exp(-1j * delta_c * taus)
        rows.append(np.exp(-1j * np.outer(frequencies, taus)) @ weighted)
    return np.array(rows)


def _spectrum(model, traj, frequencies, t0, window, n_outer, jobs, options):
    outer = np.linspace(t0, t0 + window, n_outer)
    states = states_at(model, traj, outer, options=options)
    blocks = np.array_split(np.arange(n_outer), resolve_jobs(jobs) * 4)
    payloads = [
        {
            'config': model.config,
            'outer': outer,
            'indices': block,
            'states': states[block],
            'frequencies': frequencies,
            'options': options,
        }
        for block in blocks if len(block)
    ]
    inner = np.concatenate(dispatch(inner_transforms, payloads, jobs=jobs, backend='local'))
    raw = 2.0 * np.real(trapezoid_weights(n_outer, outer[1] - outer[0]) @ inner)
    top = raw.max()
    if top <= 0:
        raise ConfigurationError("cavity emitted no light inside the window", window=window)
    normalized = raw / top
    return SpectrumResult(
        frequencies=frequencies,
        values=np.clip(normalized, 0.0, None),
        window=(float(t0), float(window)),
        raw=raw,
        negative_excursion=float(min(normalized.min(), 0.0)),
        n_outer=n_outer,
    )


def emission_spectrum(model, traj, omega_grid=None, window=DEFAULT_WINDOW, n_outer=DEFAULT_OUTER_POINTS,
                      t0=None, jobs=None, options=None, converge=False, max_doublings=2):
    """Normalized S(w) on ``omega_grid`` (values of w - delta_c).

    With ``converge`` the outer grid is doubled until every peak moves by
    less than ``PEAK_SHIFT_TOLERANCE``.
    """
    if not model.space.has_cavity:
        raise ConfigurationError("emission spectrum needs a cavity mode", factors=model.space.factors)
    frequencies = default_frequencies() if omega_grid is None else np.asarray(omega_grid, dtype=float)
    t0 = float(traj.times[0]) if t0 is None else float(t0)
    if t0 < traj.times[0] - 1e-12 or t0 + window > traj.times[-1] + 1e-12:
        raise ConfigurationError(
            "spectrum window exceeds the trajectory",
            window=[t0, t0 + window],
            trajectory=[float(traj.times[0]), float(traj.times[-1])],
        )

    result = _spectrum(model, traj, frequencies, t0, window, n_outer, jobs, options)
    for _ in range(max_doublings if converge else 0):
        finer = _spectrum(model, traj, frequencies, t0, window, 2 * result.n_outer, jobs, options)
        before, after = result.peaks(), finer.peaks()
        result = finer
        if len(before) == len(after) and np.all(np.abs(before - after) < PEAK_SHIFT_TOLERANCE):
            break
        logger.info("Spectrum peaks moved; doubling the outer grid to %d points", 2 * finer.n_outer)
    return result
