"""
Static disorder ensembles.

Position disorder jitters both emitters along the separation axis and
recomputes the couplings; energy disorder adds a random static detuning
to each emitter and leaves the dissipator alone. Every sample draws from
its own stream, seeded from (seed, sample index), so an ensemble is the
same whatever order or process its samples run in.
"""
import logging
from dataclasses import dataclass, field

import numpy as np
from rest_framework.exceptions import ValidationError

from collective.couplings import MIN_SEPARATION, collective_decay, collective_shift
from collective.dressed import DRESSED_TRANSFORM
from dynamics.config import DEFAULT_T_END, IntegratorOptions, SystemConfig
from dynamics.lindblad import build_model
from dynamics.simulation import POPULATION_LABELS, decay_grid, fit_decay_rate, population_series, simulate
from swingup.exceptions import NUMERICAL_ERRORS, ConfigurationError, DomainError, SweepFailure
from swingup.workers import dispatch

logger = logging.getLogger(__name__)

KINDS = ('position', 'energy')

POPULATION_KEYS = {label: f'P_{label}' for label in POPULATION_LABELS}
STATIC_OBSERVABLES = ('omega12', 'gamma12', 'mixing')
DECAY_OBSERVABLES = ('rate_+', 'rate_-')
OBSERVABLES = tuple(POPULATION_KEYS.values()) + STATIC_OBSERVABLES + DECAY_OBSERVABLES

MAX_RESAMPLES = 1000


@dataclass(frozen=True)
class DisorderSpec:
    kind: str = 'position'
    # Fraction of d for position disorder, units of Gamma for energy disorder
    width: float = 0.0
    n_samples: int = 1
    seed: int = 0

    def __post_init__(self):
        errors = {}
        if self.kind not in KINDS:
            errors['kind'] = [f"must be one of {', '.join(KINDS)}"]
        if not self.width >= 0:
            errors['width'] = ["must be >= 0"]
        if int(self.n_samples) != self.n_samples or self.n_samples < 1:
            errors['n_samples'] = ["must be an integer >= 1"]
        if int(self.seed) != self.seed or not 0 <= self.seed < 2**64:
            errors['seed'] = ["must be an unsigned 64-bit integer"]
        if errors:
            raise ValidationError(errors)

    def as_dict(self):
        return {'kind': self.kind, 'width': self.width, 'n_samples': self.n_samples, 'seed': self.seed}


@dataclass(frozen=True)
class Sample:
    index: int
    config: SystemConfig
    draws: tuple
    resamples: int = 0


def sample_rng(spec, index):
    return np.random.default_rng(np.random.SeedSequence(entropy=int(spec.seed), spawn_key=(int(index),)))


def draw_position(base, spec, index):
    """Perturbed separation d + z2 - z1 with z_i ~ N(0, (width * d)^2)."""
    if spec.kind != 'position':
        raise ValidationError({'kind': ["position sampling needs kind='position'"]})
    rng = sample_rng(spec, index)
    d = base.geom.d_over_lambda
    for resamples in range(MAX_RESAMPLES):
        z1, z2 = rng.normal(0.0, spec.width * d, size=2)
        separation = d + z2 - z1
        if separation >= MIN_SEPARATION:
            if resamples:
                logger.warning("Sample %d: redrew %d non-physical separations", index, resamples)
            config = base.replace(geom=base.geom.with_separation(float(separation)))
            return Sample(index=index, config=config, draws=(float(z1), float(z2)), resamples=resamples)
    raise DomainError("could not draw a positive separation", index=index, width=spec.width)


def draw_energy(base, spec, index):
    """Independent static detuning shifts delta_i ~ N(0, width^2)."""
    if spec.kind != 'energy':
        raise ValidationError({'kind': ["energy sampling needs kind='energy'"]})
    shifts = sample_rng(spec, index).normal(0.0, spec.width, size=2)
    shifts = tuple(float(s) for s in shifts)
    return Sample(index=index, config=base.replace(site_shifts=shifts), draws=shifts)


def draw_sample(base, spec, index):
    return draw_position(base, spec, index) if spec.kind == 'position' else draw_energy(base, spec, index)


def sample_position_model(base, spec, index):
    return build_model(draw_position(base, spec, index).config)


def sample_energy_model(base, spec, index):
    return build_model(draw_energy(base, spec, index).config)


def eigenstate_mixing(cfg):
    """Largest overlap |<+-|psi>|^2 of each collective state with a drift eigenvector."""
    emitter_cfg = cfg.replace(cavity=None, basis='bare')
    _, vectors = np.linalg.eigh(build_model(emitter_cfg).hamiltonian())
    overlaps = np.abs(DRESSED_TRANSFORM @ vectors) ** 2
    return {'+': float(overlaps[1].max()), '-': float(overlaps[2].max())}


def _needs_run(observables):
    return any(name not in STATIC_OBSERVABLES for name in observables)


def run_sample(payload):
    """Observables for one disorder sample; failures come back as data."""
    base = SystemConfig.from_dict(payload['base'])
    spec = DisorderSpec(**payload['spec'])
    index = payload['index']
    observables = payload['observables']
    try:
        sample = draw_sample(base, spec, index)
        record = {'index': index, 'draws': list(sample.draws), 'resamples': sample.resamples, 'values': {}}
        values = record['values']
        values['omega12'] = collective_shift(sample.config.geom)
        values['gamma12'] = collective_decay(sample.config.geom)
        values['mixing'] = 1.0 - min(eigenstate_mixing(sample.config).values())
        if _needs_run(observables):
            values.update(_dynamic_values(sample.config, payload))
        record['values'] = {name: values[name] for name in observables}
        return record
    except NUMERICAL_ERRORS as exc:
        logger.warning("Disorder sample %d failed: %s", index, exc)
        return {'index': index, 'error': exc.as_dict()}


def _dynamic_values(cfg, payload):
    t_end = payload.get('t_end', DEFAULT_T_END)
    horizon = payload.get('decay_horizon', 1.0)
    options = IntegratorOptions(**payload['options']) if payload.get('options') else IntegratorOptions()
    grid = decay_grid(cfg.pulse, t_end=t_end, horizon=horizon, n_prepare=payload.get('n_points', 201))
    model, traj = simulate(cfg, grid=grid, options=options)
    series = population_series(traj, model.dressed)
    at_end = int(np.argmin(np.abs(traj.times - t_end)))
    values = {POPULATION_KEYS[label]: float(series[label][at_end]) for label in POPULATION_LABELS}
    for label in ('+', '-'):
        try:
            values[f'rate_{label}'] = fit_decay_rate(traj.times, series[label], start=t_end)[0]
        except (RuntimeError, ConfigurationError):
            values[f'rate_{label}'] = float('nan')
    return values


@dataclass(frozen=True, eq=False)
class EnsembleResult:
    spec: DisorderSpec
    observables: tuple
    mean: dict
    stderr: dict
    samples: list = field(default_factory=list)
    failures: list = field(default_factory=list)
    resamples: int = 0

    @property
    def n_ok(self):
        return len(self.samples)

    def rows(self):
        """Per-sample rows (index, draw1, draw2, observables...) then the mean and stderr rows."""
        rows = [
            [sample['index'], *sample['draws'], *(sample['values'][name] for name in self.observables)]
            for sample in self.samples
        ]
        rows.append(['mean', '', '', *(self.mean[name] for name in self.observables)])
        rows.append(['stderr', '', '', *(self.stderr[name] for name in self.observables)])
        return rows


def aggregate(spec, observables, records):
    samples = sorted((r for r in records if 'error' not in r), key=lambda r: r['index'])
    failures = sorted((r for r in records if 'error' in r), key=lambda r: r['index'])
    if not samples:
        raise SweepFailure("every disorder sample failed", first_failure=failures[0]['error'] if failures else None)
    mean, stderr = {}, {}
    for name in observables:
        column = np.array([sample['values'][name] for sample in samples], dtype=float)
        finite = column[np.isfinite(column)]
        mean[name] = float(finite.mean()) if len(finite) else float('nan')
        stderr[name] = float(finite.std(ddof=1) / np.sqrt(len(finite))) if len(finite) > 1 else 0.0
    if failures:
        logger.warning("%d of %d disorder samples failed", len(failures), len(records))
    return EnsembleResult(
        spec=spec,
        observables=tuple(observables),
        mean=mean,
        stderr=stderr,
        samples=samples,
        failures=failures,
        resamples=sum(sample['resamples'] for sample in samples),
    )


def run_ensemble(base, spec, observables=tuple(POPULATION_KEYS.values()), t_end=DEFAULT_T_END, n_points=201,
                 decay_horizon=1.0, options=None, jobs=None, backend=None):
    """Mean and standard error of ``observables`` over ``spec.n_samples`` draws."""
    unknown = sorted(set(observables) - set(OBSERVABLES))
    if unknown:
        raise ValidationError({'observables': [f"unknown observable {name!r}" for name in unknown]})
    payloads = [
        {
            'base': base.as_dict(),
            'spec': spec.as_dict(),
            'index': index,
            'observables': list(observables),
            't_end': t_end,
            'n_points': n_points,
            'decay_horizon': decay_horizon,
            'options': None if options is None else options.as_dict(),
        }
        for index in range(spec.n_samples)
    ]
    from disorder.tasks import run_disorder_sample

    records = dispatch(run_sample, payloads, jobs=jobs, task=run_disorder_sample, backend=backend)
    logger.info("Disorder ensemble %s width=%g: %d samples", spec.kind, spec.width, len(records))
    return aggregate(spec, observables, records)
