"""
Serializers for run configuration files.

Every section rejects keys it does not know, so a typo fails loudly
instead of silently falling back to a default. Energies may be given in
meV and times in ps with ``_mev`` / ``_ps`` suffixed keys; pulse areas
and phases may be given in multiples of pi with a ``_pi`` suffix.
"""
import numpy as np
from django.conf import settings
from rest_framework import serializers

from collective.couplings import MIN_SEPARATION, RESONANCE_TARGETS
from drive.pulses import CONVENTIONS, TABLE_DELTA1, TABLE_DELTA2, TABLE_SIGMA
from drive.units import unit_convert
from dynamics.config import BASES
from disorder.ensembles import KINDS, OBSERVABLES
from observables.bloch import BLOCH_TARGETS
from sweep.grids import AXES, TARGETS

INTEGRATOR_METHODS = ('DOP853', 'RK45', 'RK23')

RESONANT_DETUNINGS = tuple(f'resonant_{target}' for target in RESONANCE_TARGETS)


class StrictSerializer(serializers.Serializer):
    """Rejects unknown keys by name and converts suffixed unit keys."""

    # field name -> unit suffixes accepted for it
    unit_fields = {}

    def to_internal_value(self, data):
        if not isinstance(data, dict):
            raise serializers.ValidationError({'non_field_errors': ["must be an object"]})
        data, errors = self.convert_units(data)
        errors.update({key: ["unknown field"] for key in sorted(set(data) - set(self.fields))})
        known = {key: value for key, value in data.items() if key in self.fields}
        try:
            value = super().to_internal_value(known)
        except serializers.ValidationError as exc:
            errors.update(exc.detail)
        if errors:
            raise serializers.ValidationError(errors)
        return value

    def convert_units(self, data):
        converted = dict(data)
        errors = {}
        for name, units in self.unit_fields.items():
            for unit in units:
                key = f'{name}_{unit}'
                if key not in data:
                    continue
                value = converted.pop(key)
                if name in data:
                    errors[key] = [f"give either {name} or {key}, not both"]
                elif isinstance(value, bool) or not isinstance(value, (int, float)):
                    errors[key] = ["must be a number"]
                elif unit == 'pi':
                    converted[name] = value * np.pi
                else:
                    converted[name] = unit_convert(value, UNIT_NAMES[unit])
        return converted, errors


UNIT_NAMES = {'mev': 'meV', 'ps': 'ps'}


class GeometrySerializer(StrictSerializer):
    d_over_lambda = serializers.FloatField(default=0.01, min_value=MIN_SEPARATION)
    theta = serializers.FloatField(default=np.pi / 2, min_value=0.0, max_value=np.pi)
    gamma = serializers.FloatField(default=1.0)

    unit_fields = {'theta': ('pi',)}

    def validate_gamma(self, value):
        if value <= 0:
            raise serializers.ValidationError("must be > 0")
        return value


class PulseSerializer(StrictSerializer):
    """Two-color pulse; detunings and widths default to the fixed scheme values."""

    delta1 = serializers.FloatField(default=TABLE_DELTA1)
    delta2 = serializers.FloatField(default=TABLE_DELTA2)
    sigma1 = serializers.FloatField(default=TABLE_SIGMA)
    sigma2 = serializers.FloatField(default=TABLE_SIGMA)
    alpha1 = serializers.FloatField(default=0.0, min_value=0.0)
    alpha2 = serializers.FloatField(default=0.0, min_value=0.0)
    tau = serializers.FloatField(default=0.0)
    phi_x = serializers.FloatField(default=0.0)
    theta = serializers.FloatField(default=0.0)
    envelope_convention = serializers.ChoiceField(choices=CONVENTIONS, default='verbatim')

    unit_fields = {
        'delta1': ('mev',),
        'delta2': ('mev',),
        'sigma1': ('ps',),
        'sigma2': ('ps',),
        'tau': ('ps',),
        'alpha1': ('pi',),
        'alpha2': ('pi',),
        'phi_x': ('pi',),
        'theta': ('pi',),
    }

    def validate_sigma1(self, value):
        return _positive(value)

    def validate_sigma2(self, value):
        return _positive(value)

    def validate_theta(self, value):
        return _phase(value)


class DetuningField(serializers.Field):
    """A number, or one of the resonant_* shortcuts resolved against the geometry."""

    def to_internal_value(self, data):
        if isinstance(data, str):
            if data not in RESONANT_DETUNINGS:
                raise serializers.ValidationError(f"must be a number or one of {', '.join(RESONANT_DETUNINGS)}")
            return data
        if isinstance(data, bool) or not isinstance(data, (int, float)) or not np.isfinite(data):
            raise serializers.ValidationError("must be a finite number")
        return float(data)

    def to_representation(self, value):
        return value


class CavitySerializer(StrictSerializer):
    g = serializers.FloatField(default=100.0)
    kappa = serializers.FloatField(default=20.0, min_value=0.0)
    delta_c = DetuningField(default='resonant_plus')
    phi1 = serializers.FloatField(default=0.0)
    phi2 = serializers.FloatField(default=0.0)
    n_fock = serializers.IntegerField(default=lambda: settings.SWINGUP_FOCK_START, min_value=2)

    unit_fields = {
        'g': ('mev',),
        'kappa': ('mev',),
        'delta_c': ('mev',),
        'phi1': ('pi',),
        'phi2': ('pi',),
    }

    def validate_g(self, value):
        return _positive(value)

    def validate_phi1(self, value):
        return _phase(value)

    def validate_phi2(self, value):
        return _phase(value)


class DisorderSerializer(StrictSerializer):
    kind = serializers.ChoiceField(choices=KINDS, default='position')
    width = serializers.FloatField(default=0.0, min_value=0.0)
    n_samples = serializers.IntegerField(default=200, min_value=1)
    observables = serializers.ListField(
        child=serializers.ChoiceField(choices=OBSERVABLES), default=lambda: ['P_G', 'P_+', 'P_-', 'P_X'],
        allow_empty=False,
    )
    decay_horizon = serializers.FloatField(default=1.0, min_value=0.0)

    unit_fields = {'width': ('mev',)}


class AxisSerializer(StrictSerializer):
    name = serializers.ChoiceField(choices=AXES)
    lo = serializers.FloatField()
    hi = serializers.FloatField()
    n_points = serializers.IntegerField(default=64, min_value=2)
    in_pi = serializers.BooleanField(default=False)

    def validate(self, attrs):
        if not attrs['lo'] < attrs['hi']:
            raise serializers.ValidationError({'hi': ["must be greater than lo"]})
        return attrs


class SweepSerializer(StrictSerializer):
    axis1 = AxisSerializer(default=lambda: {'name': 'alpha1', 'lo': 20.0, 'hi': 100.0, 'n_points': 64,
                                            'in_pi': True})
    axis2 = AxisSerializer(default=lambda: {'name': 'alpha2', 'lo': 40.0, 'hi': 120.0, 'n_points': 64,
                                            'in_pi': True})
    targets = serializers.ListField(child=serializers.ChoiceField(choices=TARGETS), default=lambda: list(TARGETS),
                                    allow_empty=False)
    n_theta = serializers.IntegerField(default=21, min_value=2)

    def validate(self, attrs):
        if attrs['axis1']['name'] == attrs['axis2']['name']:
            raise serializers.ValidationError({'axis2': ["must scan a different parameter than axis1"]})
        return attrs


class SpectrumSerializer(StrictSerializer):
    window = serializers.FloatField(default=0.6)
    n_outer = serializers.IntegerField(default=512, min_value=2)
    omega_min = serializers.FloatField(default=-300.0)
    omega_max = serializers.FloatField(default=300.0)
    n_omega = serializers.IntegerField(default=1201, min_value=2)
    converge = serializers.BooleanField(default=False)

    def validate_window(self, value):
        return _positive(value)

    def validate(self, attrs):
        if not attrs['omega_min'] < attrs['omega_max']:
            raise serializers.ValidationError({'omega_max': ["must be greater than omega_min"]})
        return attrs


class G2Serializer(StrictSerializer):
    tau_f = serializers.FloatField(default=0.02)
    tau_max = serializers.FloatField(default=0.1)
    n_tau = serializers.IntegerField(default=201, min_value=1)

    def validate_tau_max(self, value):
        if value < 0:
            raise serializers.ValidationError("must be >= 0")
        return value


class BlochSerializer(StrictSerializer):
    thetas = serializers.ListField(child=serializers.FloatField(), default=lambda: [0.0, np.pi / 2, np.pi],
                                   allow_empty=False)
    targets = serializers.ListField(child=serializers.ChoiceField(choices=BLOCH_TARGETS),
                                    default=lambda: list(BLOCH_TARGETS), allow_empty=False)

    def validate_thetas(self, value):
        return [_phase(theta) for theta in value]


class DecaySerializer(StrictSerializer):
    horizon = serializers.FloatField(default=1.0)
    n_decay = serializers.IntegerField(default=201, min_value=3)
    fit_start = serializers.FloatField(default=0.05)
    fit_stop = serializers.FloatField(default=0.5)

    def validate_horizon(self, value):
        return _positive(value)

    def validate(self, attrs):
        if not attrs['fit_start'] < attrs['fit_stop']:
            raise serializers.ValidationError({'fit_stop': ["must be greater than fit_start"]})
        return attrs


class IntegratorSerializer(StrictSerializer):
    rtol = serializers.FloatField(default=lambda: settings.SWINGUP_RTOL)
    atol = serializers.FloatField(default=lambda: settings.SWINGUP_ATOL)
    method = serializers.ChoiceField(choices=INTEGRATOR_METHODS, default='DOP853')
    steps_per_sigma = serializers.IntegerField(default=50, min_value=1)
    steps_per_beat = serializers.IntegerField(default=20, min_value=1)

    def validate_rtol(self, value):
        return _unit_interval(value)

    def validate_atol(self, value):
        return _unit_interval(value)


class RunConfigSerializer(StrictSerializer):
    """The whole run configuration file; every section is optional."""

    geometry = GeometrySerializer()
    pulse = PulseSerializer()
    cavity = CavitySerializer(default=None, allow_null=True)
    basis = serializers.ChoiceField(choices=BASES, default='bare')
    integrator = IntegratorSerializer()
    disorder = DisorderSerializer()
    sweep = SweepSerializer()
    spectrum = SpectrumSerializer()
    g2 = G2Serializer()
    bloch = BlochSerializer()
    decay = DecaySerializer()
    # End-of-pulse marker of the reference runs; the verbatim envelope (std sqrt(2) sigma) is still on there
    t_end = serializers.FloatField(default=0.02)
    n_points = serializers.IntegerField(default=401, min_value=2)
    seed = serializers.IntegerField(default=0, min_value=0, max_value=2**64 - 1)
    out = serializers.CharField(default=None, allow_null=True)

    # Sections filled from their own field defaults when absent
    sections = ('geometry', 'pulse', 'integrator', 'disorder', 'sweep', 'spectrum', 'g2', 'bloch', 'decay')

    def to_internal_value(self, data):
        if isinstance(data, dict):
            data = {**{name: {} for name in self.sections}, **data}
        return super().to_internal_value(data)


def _positive(value):
    if value <= 0:
        raise serializers.ValidationError("must be > 0")
    return value


def _phase(value):
    if not -np.pi < value <= np.pi + 1e-12:
        raise serializers.ValidationError("must lie in (-pi, pi]")
    return value


def _unit_interval(value):
    if not 0 < value < 1:
        raise serializers.ValidationError("must lie in (0, 1)")
    return value
