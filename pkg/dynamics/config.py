"""
System and integrator configuration records.
"""
from dataclasses import asdict, dataclass, field, replace
from typing import Optional

import numpy as np
from django.conf import settings
from rest_framework.exceptions import ValidationError

from collective.couplings import Geometry
from drive.pulses import SuperPulseConfig, in_phase_range

BASES = ('bare', 'dressed')

# End of the state-preparation window
DEFAULT_T_END = 0.02


@dataclass(frozen=True)
class CavityConfig:
    g: float = 100.0
    kappa: float = 20.0
    delta_c: float = -7595.58
    phi1: float = 0.0
    phi2: float = 0.0
    n_fock: int = 5

    def __post_init__(self):
        errors = {}
        if not self.g > 0:
            errors['g'] = ["must be > 0"]
        if not self.kappa >= 0:
            errors['kappa'] = ["must be >= 0"]
        if int(self.n_fock) != self.n_fock or self.n_fock < 2:
            errors['n_fock'] = ["must be an integer >= 2"]
        for name in ('phi1', 'phi2'):
            if not in_phase_range(getattr(self, name)):
                errors[name] = ["must lie in (-pi, pi]"]
        if not np.isfinite(self.delta_c):
            errors['delta_c'] = ["must be finite"]
        if errors:
            raise ValidationError(errors)

    @property
    def couplings(self):
        """Complex emitter-mode couplings g * exp(i phi_i)."""
        return (self.g * np.exp(1j * self.phi1), self.g * np.exp(1j * self.phi2))


@dataclass(frozen=True)
class SystemConfig:
    geom: Geometry = field(default_factory=Geometry)
    pulse: SuperPulseConfig = field(default_factory=SuperPulseConfig)
    cavity: Optional[CavityConfig] = None
    basis: str = 'bare'
    # Static per-emitter detuning offsets, used by the energy-disorder surrogate
    site_shifts: tuple = (0.0, 0.0)

    def __post_init__(self):
        if self.basis not in BASES:
            raise ValidationError({'basis': [f"must be one of {', '.join(BASES)}"]})
        if len(self.site_shifts) != 2:
            raise ValidationError({'site_shifts': ["needs one shift per emitter"]})
        object.__setattr__(self, 'site_shifts', tuple(float(s) for s in self.site_shifts))

    def replace(self, **changes):
        return replace(self, **changes)

    def with_fock(self, n_fock):
        return replace(self, cavity=replace(self.cavity, n_fock=n_fock))

    def as_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, data):
        """Inverse of ``as_dict``; payloads cross process and broker boundaries this way."""
        cavity = data.get('cavity')
        return cls(
            geom=Geometry(**data['geom']),
            pulse=SuperPulseConfig(**data['pulse']),
            cavity=None if cavity is None else CavityConfig(**cavity),
            basis=data.get('basis', 'bare'),
            site_shifts=tuple(data.get('site_shifts', (0.0, 0.0))),
        )


def _setting(name):
    return lambda: getattr(settings, name)


@dataclass(frozen=True)
class IntegratorOptions:
    rtol: float = field(default_factory=_setting('SWINGUP_RTOL'))
    atol: float = field(default_factory=_setting('SWINGUP_ATOL'))
    method: str = 'DOP853'
    check_invariants: bool = True
    # Samples per pulse width and per beat period inside the drive window
    steps_per_sigma: int = 50
    steps_per_beat: int = 20

    def __post_init__(self):
        errors = {}
        if not 0 < self.rtol < 1:
            errors['rtol'] = ["must lie in (0, 1)"]
        if not 0 < self.atol < 1:
            errors['atol'] = ["must lie in (0, 1)"]
        if errors:
            raise ValidationError(errors)

    def tighter(self, factor=100.0):
        return replace(self, rtol=self.rtol / factor, atol=self.atol / factor)

    def as_dict(self):
        return asdict(self)
