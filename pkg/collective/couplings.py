"""
Distance- and orientation-dependent dipole-dipole couplings.

All rates and energies are in units of the single-emitter decay rate,
so the default ``gamma`` is 1. The phase argument is k0*d = 2*pi*d/lambda.
"""
import logging
from dataclasses import dataclass, replace

import numpy as np
from rest_framework.exceptions import ValidationError

from swingup.exceptions import DomainError

logger = logging.getLogger(__name__)

# Below this the near-field terms cancel catastrophically in double precision
MIN_SEPARATION = 1e-3

RESONANCE_TARGETS = ('plus', 'minus', 'bare')


@dataclass(frozen=True)
class Geometry:
    d_over_lambda: float = 0.01
    theta: float = np.pi / 2
    gamma: float = 1.0

    def __post_init__(self):
        check_separation(self.d_over_lambda)
        errors = {}
        if not 0.0 <= self.theta <= np.pi:
            errors['theta'] = ["must lie in [0, pi]"]
        if not self.gamma > 0.0:
            errors['gamma'] = ["must be > 0"]
        if errors:
            raise ValidationError(errors)

    @property
    def k0d(self):
        return 2.0 * np.pi * self.d_over_lambda

    def with_separation(self, d_over_lambda):
        return replace(self, d_over_lambda=d_over_lambda)


def check_separation(d_over_lambda):
    if not np.isfinite(d_over_lambda) or d_over_lambda <= 0.0:
        raise DomainError("separation must be positive", d_over_lambda=d_over_lambda)
    if d_over_lambda < MIN_SEPARATION:
        raise DomainError(
            f"separation below {MIN_SEPARATION} wavelengths is not evaluated",
            d_over_lambda=d_over_lambda,
        )


def _shift(x, cos2, gamma):
    return -0.75 * gamma * (
        (1.0 - cos2) * np.cos(x) / x
        - (1.0 - 3.0 * cos2) * (np.sin(x) / x**2 + np.cos(x) / x**3)
    )


def _decay(x, cos2, gamma):
    return 1.5 * gamma * (
        (1.0 - cos2) * np.sin(x) / x
        + (1.0 - 3.0 * cos2) * (np.cos(x) / x**2 - np.sin(x) / x**3)
    )


def collective_shift(geom):
    """Coherent exchange Omega_12 between the two emitters."""
    return float(_shift(geom.k0d, np.cos(geom.theta) ** 2, geom.gamma))


def collective_decay(geom):
    """Cross-damping rate Gamma_12; |Gamma_12| <= Gamma."""
    return float(_decay(geom.k0d, np.cos(geom.theta) ** 2, geom.gamma))


def rate_channels(geom):
    """Eigen-channels of the rate matrix [[G, G12], [G12, G]].

    Returns ``((rate, weights), ...)`` for the symmetric and the
    antisymmetric combination of the two lowering operators.
    """
    gamma12 = collective_decay(geom)
    half = 1.0 / np.sqrt(2.0)
    return (
        (geom.gamma + gamma12, (half, half)),
        (max(geom.gamma - gamma12, 0.0), (half, -half)),
    )


def coupling_curve(d_values, theta=np.pi / 2, gamma=1.0):
    """Rows of (d/lambda, Omega_12, Gamma_12) over a separation grid."""
    d_values = np.asarray(d_values, dtype=float)
    for d in d_values:
        check_separation(d)
    x = 2.0 * np.pi * d_values
    cos2 = np.cos(theta) ** 2
    return np.column_stack([d_values, _shift(x, cos2, gamma), _decay(x, cos2, gamma)])


def resonant_cavity_detuning(geom, delta1, target):
    """Cavity detuning that puts the mode on resonance with ``target``.

    The drift Hamiltonian carries ``-delta_c a^dag a``, so resonance with a
    level of rotating-frame energy E needs ``delta_c = -E``.
    """
    if target == 'bare':
        return float(delta1)
    omega12 = collective_shift(geom)
    if target == 'plus':
        return float(delta1 - omega12)
    if target == 'minus':
        return float(delta1 + omega12)
    raise ValidationError({'target': [f"must be one of {', '.join(RESONANCE_TARGETS)}"]})
