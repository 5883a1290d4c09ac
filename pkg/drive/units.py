"""
Conversion from lab units to scaled units (Gamma = 1, 1/Gamma = 1 ns).
"""
import numpy as np
from rest_framework.exceptions import ValidationError

# 1 meV / hbar expressed in units of Gamma = 1 ns^-1
GAMMA_PER_MEV = 1519.116
# 1 ps in units of 1/Gamma
INVERSE_GAMMA_PER_PS = 1e-3

UNITS = {
    'meV': GAMMA_PER_MEV,
    'ps': INVERSE_GAMMA_PER_PS,
}


def unit_convert(value, unit):
    """Scale an energy in meV or a time in ps to simulation units."""
    if unit not in UNITS:
        raise ValidationError({'unit': [f"must be one of {', '.join(UNITS)}"]})
    if not np.isfinite(value):
        raise ValidationError({'value': ["must be finite"]})
    return float(value) * UNITS[unit]


def from_mev(value):
    return unit_convert(value, 'meV')


def from_ps(value):
    return unit_convert(value, 'ps')
