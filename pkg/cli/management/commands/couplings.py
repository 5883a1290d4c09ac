"""
Dipole-dipole couplings of the configured geometry and over a separation range.
Run: python manage.py couplings --d-min 0.005 --d-max 1 --n 200
"""
import numpy as np
from rest_framework.exceptions import ValidationError

from cli.commands import SwingupCommand
from collective.couplings import coupling_curve
from collective.dressed import dressed_basis


class Command(SwingupCommand):
    help = 'Collective shift and decay rate versus emitter separation'

    def add_command_arguments(self, parser):
        parser.add_argument('--d-min', type=float, default=0.005, dest='d_min')
        parser.add_argument('--d-max', type=float, default=1.0, dest='d_max')
        parser.add_argument('--n', type=int, default=200, dest='n_d')

    def run(self, run_config, **options):
        if not 0 < options['d_min'] < options['d_max'] or options['n_d'] < 2:
            raise ValidationError({'d_range': ["need 0 < d-min < d-max and n >= 2"]})
        geom = run_config.system.geom
        curve = coupling_curve(np.linspace(options['d_min'], options['d_max'], options['n_d']),
                               theta=geom.theta, gamma=geom.gamma)
        self.write_csv('couplings.csv', ['d_over_lambda', 'omega12', 'gamma12'], curve.tolist(), run_config)

        basis = dressed_basis(geom, run_config.system.pulse.delta1)
        self.write_json('couplings.json', {
            'd_over_lambda': geom.d_over_lambda,
            'omega12': basis.omega12,
            'gamma12': basis.gamma12,
            'energies': basis.energies,
            'decay_rates': basis.decay_rates,
        }, run_config)
        self.stdout.write(f'Omega12 = {basis.omega12:.6f}, Gamma12 = {basis.gamma12:.6f}')
