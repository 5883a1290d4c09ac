"""
Two-color SUPER pulse envelopes and rotating-frame drive coefficients.

Envelope i is Omega_S^i(t) = alpha_i / sqrt(2 pi sigma_i^2) * exp(-(t - t_i)^2 / w)
with t_1 = 0, t_2 = tau and

    w = (2 sigma_i)^2      for envelope_convention = 'verbatim'
    w = 2 sigma_i^2        for envelope_convention = 'conventional'

so the Gaussian standard deviation is sqrt(2) sigma_i or sigma_i. Each
envelope is exactly zero beyond ``SUPPORT_WIDTHS`` standard deviations
from its center.
"""
from dataclasses import asdict, dataclass, replace

import numpy as np
from rest_framework.exceptions import ValidationError

SUPPORT_WIDTHS = 6.0

CONVENTIONS = ('verbatim', 'conventional')

# Fixed detunings and widths of the two-color scheme, scaled units
TABLE_DELTA1 = -7595.58
TABLE_DELTA2 = -15191.16
TABLE_SIGMA = 0.006


def wrap_phase(phase):
    """Map an angle into (-pi, pi]."""
    wrapped = np.angle(np.exp(1j * phase))
    return float(np.pi) if np.isclose(wrapped, -np.pi) else float(wrapped)


def in_phase_range(phase):
    return -np.pi < phase <= np.pi + 1e-12


@dataclass(frozen=True)
class SuperPulseConfig:
    delta1: float = TABLE_DELTA1
    delta2: float = TABLE_DELTA2
    sigma1: float = TABLE_SIGMA
    sigma2: float = TABLE_SIGMA
    alpha1: float = 0.0
    alpha2: float = 0.0
    tau: float = 0.0
    phi_x: float = 0.0
    theta: float = 0.0
    envelope_convention: str = 'verbatim'

    def __post_init__(self):
        errors = {}
        for name in ('sigma1', 'sigma2'):
            if not getattr(self, name) > 0:
                errors[name] = ["must be > 0"]
        for name in ('alpha1', 'alpha2'):
            if not getattr(self, name) >= 0:
                errors[name] = ["must be >= 0"]
        if not in_phase_range(self.theta):
            errors['theta'] = ["must lie in (-pi, pi]"]
        if self.envelope_convention not in CONVENTIONS:
            errors['envelope_convention'] = [f"must be one of {', '.join(CONVENTIONS)}"]
        if errors:
            raise ValidationError(errors)

    @property
    def emitter_phases(self):
        """Optical phases (vartheta_1, vartheta_2) = (theta, 0)."""
        return (self.theta, 0.0)

    def sigma(self, which):
        return self.sigma1 if which == 1 else self.sigma2

    def alpha(self, which):
        return self.alpha1 if which == 1 else self.alpha2

    def center(self, which):
        return 0.0 if which == 1 else self.tau

    def std(self, which):
        scale = np.sqrt(2.0) if self.envelope_convention == 'verbatim' else 1.0
        return scale * self.sigma(which)

    def peak(self, which):
        return self.alpha(which) / (np.sqrt(2.0 * np.pi) * self.sigma(which))

    def support(self, which):
        half = SUPPORT_WIDTHS * self.std(which)
        return self.center(which) - half, self.center(which) + half

    def window(self):
        """Smallest interval holding both envelope supports."""
        starts, ends = zip(self.support(1), self.support(2))
        return min(starts), max(ends)

    def start_time(self):
        """Integration start, -SUPPORT_WIDTHS standard deviations of the wider pulse.

        The count is in envelope standard deviations, not in sigma: the
        verbatim envelope starts at -6 sqrt(2) max(sigma), the
        conventional one at -6 max(sigma).
        """
        return -SUPPORT_WIDTHS * max(self.std(1), self.std(2))

    def beat_period(self):
        beat = abs(self.delta1 - self.delta2)
        return np.inf if beat == 0 else 2.0 * np.pi / beat

    def is_off(self):
        return self.alpha1 == 0 and self.alpha2 == 0

    def area(self, which):
        """Closed-form time integral of envelope ``which``."""
        return self.peak(which) * np.sqrt(2.0 * np.pi) * self.std(which)

    def as_dict(self):
        return asdict(self)

    def replace(self, **changes):
        return replace(self, **changes)


def envelope(cfg, which, t):
    """Real amplitude Omega_S^which at time(s) ``t``."""
    t = np.asarray(t, dtype=float)
    offset = t - cfg.center(which)
    std = cfg.std(which)
    values = cfg.peak(which) * np.exp(-0.5 * (offset / std) ** 2)
    values = np.where(np.abs(offset) > SUPPORT_WIDTHS * std, 0.0, values)
    return values if values.ndim else float(values)


def drive_terms(cfg, t):
    """Coefficients (f1, f2) multiplying the drive operator at time ``t``.

    f1 = Omega_S^1(t) / 2
    f2 = Omega_S^2(t - tau) / 2 * exp(i (delta1 - delta2) t + i phi_x)
    """
    f1 = 0.5 * envelope(cfg, 1, t)
    f2 = 0.5 * envelope(cfg, 2, t) * np.exp(1j * ((cfg.delta1 - cfg.delta2) * np.asarray(t) + cfg.phi_x))
    return f1 + 0j, f2


def pulse_profile(cfg, times):
    """Both envelopes on ``times``, each normalized to its own maximum."""
    profiles = []
    for which in (1, 2):
        values = envelope(cfg, which, np.asarray(times, dtype=float))
        top = np.max(values) if np.size(values) else 0.0
        profiles.append(values / top if top > 0 else np.zeros_like(values))
    return profiles
