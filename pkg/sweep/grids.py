"""
Pulse-parameter heatmaps and phase sweeps.

Every grid point is one independent preparation run. Points are shipped
to ``swingup.workers.dispatch`` as JSON payloads and the results are
written back into pre-shaped arrays by cell index, so a heatmap does not
depend on the order its points finish in. A failed point is logged and
left as ``MISSING``; only a grid where every point failed is an error.
"""
import logging
from dataclasses import dataclass, field

import numpy as np
from rest_framework.exceptions import ValidationError

from dynamics.config import DEFAULT_T_END, IntegratorOptions, SystemConfig
from dynamics.simulation import POPULATION_LABELS, final_populations, population_series, simulate, time_grid
from drive.pulses import wrap_phase
from swingup.exceptions import NUMERICAL_ERRORS, SweepFailure
from swingup.workers import dispatch

logger = logging.getLogger(__name__)

# Pulse fields a grid axis may scan, plus the emitter separation
PULSE_AXES = ('alpha1', 'alpha2', 'tau', 'phi_x', 'theta')
AXES = PULSE_AXES + ('d_over_lambda',)

TARGETS = tuple(f'P_{label}' for label in POPULATION_LABELS)

MISSING = float('nan')


@dataclass(frozen=True)
class Axis:
    name: str
    lo: float
    hi: float
    n_points: int = 64
    # lo and hi are multiples of pi, the way pulse areas are quoted
    in_pi: bool = False

    def __post_init__(self):
        errors = {}
        if self.name not in AXES:
            errors['name'] = [f"must be one of {', '.join(AXES)}"]
        if int(self.n_points) != self.n_points or self.n_points < 2:
            errors['n_points'] = ["must be an integer >= 2"]
        if not self.lo < self.hi:
            errors['hi'] = ["must be greater than lo"]
        if errors:
            raise ValidationError(errors)

    @property
    def values(self):
        scale = np.pi if self.in_pi else 1.0
        return scale * np.linspace(self.lo, self.hi, int(self.n_points))

    def as_dict(self):
        return {'name': self.name, 'lo': self.lo, 'hi': self.hi, 'n_points': self.n_points, 'in_pi': self.in_pi}


@dataclass(frozen=True)
class SweepGrid:
    axis1: Axis
    axis2: Axis
    fixed: SystemConfig = field(default_factory=SystemConfig)
    targets: tuple = TARGETS

    def __post_init__(self):
        errors = {}
        if self.axis1.name == self.axis2.name:
            errors['axis2'] = ["must scan a different parameter than axis1"]
        unknown = [name for name in self.targets if name not in TARGETS]
        if unknown or not self.targets:
            errors['targets'] = [f"must be a non-empty subset of {', '.join(TARGETS)}"]
        if errors:
            raise ValidationError(errors)
        object.__setattr__(self, 'targets', tuple(self.targets))

    @property
    def shape(self):
        return (int(self.axis1.n_points), int(self.axis2.n_points))

    def cells(self):
        """(i, j, value1, value2) in row-major order."""
        for i, v1 in enumerate(self.axis1.values):
            for j, v2 in enumerate(self.axis2.values):
                yield i, j, float(v1), float(v2)


def point_config(fixed, assignments):
    """``fixed`` with the scanned parameters replaced."""
    pulse_changes = {}
    cfg = fixed
    for name, value in assignments.items():
        if name == 'd_over_lambda':
            cfg = cfg.replace(geom=cfg.geom.with_separation(value))
        elif name in ('theta', 'phi_x'):
            pulse_changes[name] = wrap_phase(value)
        elif name in PULSE_AXES:
            pulse_changes[name] = value
        else:
            raise ValidationError({'name': [f"cannot scan {name!r}"]})
    if pulse_changes:
        cfg = cfg.replace(pulse=cfg.pulse.replace(**pulse_changes))
    return cfg


def _options(payload):
    return IntegratorOptions(**payload['options']) if payload.get('options') else None


def run_point(payload):
    """Final populations of one heatmap cell; failures come back as data."""
    cell = payload['cell']
    try:
        cfg = point_config(SystemConfig.from_dict(payload['fixed']), payload['assignments'])
        model, traj = simulate(cfg, t_end=payload['t_end'], n_points=2, options=_options(payload))
        populations = final_populations(traj, model.dressed)
        return {'cell': cell, 'values': {f'P_{label}': populations[label] for label in POPULATION_LABELS}}
    except NUMERICAL_ERRORS as exc:
        logger.warning("Sweep point %s failed: %s", cell, exc)
        return {'cell': cell, 'error': exc.as_dict()}


def run_phase_point(payload):
    """Population series of one phase-sweep row."""
    row = payload['row']
    try:
        cfg = SystemConfig.from_dict(payload['config'])
        model, traj = simulate(cfg, grid=np.asarray(payload['times']), options=_options(payload))
        series = population_series(traj, model.dressed)
        return {'row': row, 'series': {label: values.tolist() for label, values in series.items()}}
    except NUMERICAL_ERRORS as exc:
        logger.warning("Phase-sweep row %d failed: %s", row, exc)
        return {'row': row, 'error': exc.as_dict()}


def _raise_if_empty(records, what):
    failures = [record for record in records if 'error' in record]
    if failures and len(failures) == len(records):
        raise SweepFailure(f"every {what} failed", first_failure=failures[0]['error'])
    if failures:
        logger.warning("%d of %d %ss failed", len(failures), len(records), what)
    return failures


@dataclass(frozen=True, eq=False)
class BestCell:
    target: str
    index: tuple
    axis_values: dict
    value: float
    # Cells sharing the maximum; the lowest index wins
    ties: int = 1

    def as_dict(self):
        return {
            'target': self.target,
            'index': list(self.index),
            'axis_values': dict(self.axis_values),
            'value': self.value,
            'ties': self.ties,
        }


@dataclass(frozen=True, eq=False)
class Heatmap:
    grid: SweepGrid
    values: dict
    failures: list = field(default_factory=list)

    @property
    def axis1_values(self):
        return self.grid.axis1.values

    @property
    def axis2_values(self):
        return self.grid.axis2.values

    def best(self, target):
        return best_cell(self, target)


def best_cell(heatmap, target):
    """Cell with the largest ``target`` value, ties broken by lowest (i, j)."""
    if target not in heatmap.values:
        raise ValidationError({'target': [f"heatmap has no {target!r} values"]})
    values = np.asarray(heatmap.values[target], dtype=float)
    if values.size == 0 or np.isnan(values).all():
        raise SweepFailure("no completed cells to rank", first_failure=None)
    flat = int(np.nanargmax(values))
    i, j = np.unravel_index(flat, values.shape)
    best = float(values[i, j])
    ties = int(np.count_nonzero(values == best))
    if ties > 1:
        logger.info("%d cells share the maximum %s=%.6g; reporting the first", ties, target, best)
    axis_values = {
        heatmap.grid.axis1.name: float(heatmap.axis1_values[i]),
        heatmap.grid.axis2.name: float(heatmap.axis2_values[j]),
    }
    return BestCell(target=target, index=(int(i), int(j)), axis_values=axis_values, value=best, ties=ties)


def run_heatmap(grid, t_end=DEFAULT_T_END, options=None, jobs=None, backend=None):
    """Final populations of every ``grid.targets`` entry over the two axes."""
    fixed = grid.fixed.as_dict()
    payloads = [
        {
            'cell': [i, j],
            'fixed': fixed,
            'assignments': {grid.axis1.name: v1, grid.axis2.name: v2},
            't_end': t_end,
            'options': None if options is None else options.as_dict(),
        }
        for i, j, v1, v2 in grid.cells()
    ]
    from sweep.tasks import run_sweep_point

    logger.info("Heatmap %s x %s: %d points", grid.axis1.name, grid.axis2.name, len(payloads))
    records = dispatch(run_point, payloads, jobs=jobs, task=run_sweep_point, backend=backend)
    failures = _raise_if_empty(records, 'sweep point')

    values = {target: np.full(grid.shape, MISSING) for target in grid.targets}
    for record in records:
        if 'error' in record:
            continue
        i, j = record['cell']
        for target in grid.targets:
            values[target][i, j] = record['values'][target]
    return Heatmap(grid=grid, values=values, failures=sorted(failures, key=lambda r: tuple(r['cell'])))


def phase_grid(n_points=21):
    """linspace(-pi, pi, n) labels; the -pi end is run as pi."""
    if int(n_points) != n_points or n_points < 2:
        raise ValidationError({'n_theta': ["must be an integer >= 2"]})
    return np.linspace(-np.pi, np.pi, int(n_points))


@dataclass(frozen=True, eq=False)
class PhaseSweepResult:
    thetas: np.ndarray
    times: np.ndarray
    surfaces: dict
    failures: list = field(default_factory=list)

    def final(self, label):
        """P_label at the last output time for every theta."""
        return self.surfaces[label][:, -1]


def run_phase_sweep(cfg, n_theta=21, t_end=DEFAULT_T_END, n_points=201, options=None, jobs=None, backend=None):
    """P_j(t, theta) surfaces with every other parameter held at ``cfg``."""
    thetas = phase_grid(n_theta)
    times = time_grid(cfg.pulse, t_end=t_end, n_points=n_points)
    payloads = [
        {
            'row': row,
            'config': cfg.replace(pulse=cfg.pulse.replace(theta=wrap_phase(theta))).as_dict(),
            'times': times.tolist(),
            'options': None if options is None else options.as_dict(),
        }
        for row, theta in enumerate(thetas)
    ]
    from sweep.tasks import run_phase_sweep_point

    logger.info("Phase sweep: %d theta values", len(payloads))
    records = dispatch(run_phase_point, payloads, jobs=jobs, task=run_phase_sweep_point, backend=backend)
    failures = _raise_if_empty(records, 'phase-sweep row')

    surfaces = {label: np.full((len(thetas), len(times)), MISSING) for label in POPULATION_LABELS}
    for record in records:
        if 'error' in record:
            continue
        for label in POPULATION_LABELS:
            surfaces[label][record['row']] = record['series'][label]
    return PhaseSweepResult(thetas=thetas, times=times, surfaces=surfaces,
                            failures=sorted(failures, key=lambda r: r['row']))
