"""
Run configuration files.

A run configuration is a single JSON object. ``parse_config`` validates
it with ``RunConfigSerializer`` and builds the library records from the
validated data; ``RunConfig.as_dict`` gives back a canonical document
that parses to the same run.
"""
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np
from rest_framework.exceptions import ValidationError

from cli.serializers import RunConfigSerializer
from collective.couplings import Geometry, resonant_cavity_detuning
from disorder.ensembles import DisorderSpec
from drive.pulses import SuperPulseConfig
from dynamics.config import CavityConfig, IntegratorOptions, SystemConfig
from sweep.grids import Axis, SweepGrid

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class RunConfig:
    data: dict
    system: SystemConfig
    options: IntegratorOptions
    disorder: DisorderSpec
    sweep: SweepGrid
    t_end: float
    n_points: int
    seed: int
    out: Optional[str] = None

    def section(self, name):
        return self.data[name]

    def as_dict(self):
        return json.loads(json.dumps(self.data))

    def canonical_json(self):
        return json.dumps(self.data, sort_keys=True, separators=(',', ':'))


def _plain(value):
    """Validated data as plain JSON types (OrderedDicts and numpy scalars removed)."""
    if isinstance(value, dict):
        return {key: _plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(item) for item in value]
    if isinstance(value, np.generic):
        return value.item()
    return value


def _cavity(data, geom, pulse):
    if data is None:
        return None
    fields = dict(data)
    if isinstance(fields['delta_c'], str):
        target = fields['delta_c'].removeprefix('resonant_')
        fields['delta_c'] = resonant_cavity_detuning(geom, pulse.delta1, target)
    return CavityConfig(**fields)


def build_run_config(data):
    """Library records from validated serializer data."""
    geom = Geometry(**data['geometry'])
    pulse = SuperPulseConfig(**data['pulse'])
    system = SystemConfig(
        geom=geom,
        pulse=pulse,
        cavity=_cavity(data['cavity'], geom, pulse),
        basis=data['basis'],
    )
    disorder = data['disorder']
    sweep = data['sweep']
    return RunConfig(
        data=data,
        system=system,
        options=IntegratorOptions(**data['integrator']),
        disorder=DisorderSpec(kind=disorder['kind'], width=disorder['width'],
                              n_samples=disorder['n_samples'], seed=data['seed']),
        sweep=SweepGrid(
            axis1=Axis(**sweep['axis1']),
            axis2=Axis(**sweep['axis2']),
            fixed=system,
            targets=tuple(sweep['targets']),
        ),
        t_end=data['t_end'],
        n_points=data['n_points'],
        seed=data['seed'],
        out=data['out'],
    )


def load_config(document):
    """Validate a configuration document, reporting every error at once."""
    if document is None:
        document = {}
    serializer = RunConfigSerializer(data=document)
    if not serializer.is_valid():
        raise ValidationError(serializer.errors)
    return build_run_config(_plain(serializer.validated_data))


def read_document(path):
    try:
        text = Path(path).read_text(encoding='utf-8')
    except OSError as exc:
        raise ValidationError({'config': [f"cannot read {path}: {exc.strerror}"]})
    if not text.strip():
        return {}
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError({'config': [f"not valid JSON: {exc.msg} at line {exc.lineno}"]})
    if not isinstance(document, dict):
        raise ValidationError({'config': ["must be a JSON object"]})
    return document


def parse_config(path):
    """Read and validate the JSON configuration at ``path``; an empty file means all defaults."""
    document = read_document(path)
    logger.debug("Parsed configuration %s", path)
    return load_config(document)


def apply_overrides(document, assignments):
    """Set ``section.key=value`` pairs on a raw document; values are read as JSON when they parse."""
    document = json.loads(json.dumps(document or {}))
    for assignment in assignments or ():
        key, sep, raw = assignment.partition('=')
        if not sep or not key:
            raise ValidationError({'set': [f"expected KEY=VALUE, got {assignment!r}"]})
        try:
            value = json.loads(raw)
        except json.JSONDecodeError:
            value = raw
        *parents, leaf = key.split('.')
        target = document
        for parent in parents:
            node = target.setdefault(parent, {})
            if not isinstance(node, dict):
                raise ValidationError({'set': [f"{parent!r} is not a section"]})
            target = node
        target[leaf] = value
    return document
