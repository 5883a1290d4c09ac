"""
Photon-pair correlation g2(tau_f, tau_t) of the cavity output.
Run: python manage.py g2 --config run.json
"""
import numpy as np

from cli.commands import SwingupCommand
from dynamics.simulation import simulate
from observables.g2 import g2_function
from observables.photons import normally_ordered_g2
from observables.correlations import state_at
from swingup.exceptions import ConfigurationError


class Command(SwingupCommand):
    help = 'Second-order correlation with the first detection at tau_f'

    def run(self, run_config, **options):
        system = run_config.system
        if system.cavity is None:
            raise ConfigurationError("g2 needs a cavity section")
        settings = run_config.section('g2')
        model, traj = simulate(system, t_end=max(settings['tau_f'], run_config.t_end), n_points=run_config.n_points,
                               options=run_config.options)
        tau_t = np.linspace(0.0, settings['tau_max'], settings['n_tau'])
        result = g2_function(model, traj, tau_f=settings['tau_f'], tau_t_grid=tau_t, options=run_config.options)
        self.write_csv('g2.csv', ['tau_t', 'g2', 'masked'], result.rows(), run_config,
                       tau_f=result.tau_f, n_fock=traj.metadata.get('n_fock'))
        direct = normally_ordered_g2(state_at(model, traj, settings['tau_f'], options=run_config.options))
        self.write_json('g2.json', {
            'tau_f': result.tau_f,
            'g2_at_zero': result.at_zero,
            'g2_direct': direct,
            'masked': int(result.floor_mask.sum()),
        }, run_config)
        self.stdout.write(f'g2(tau_f, 0) = {result.at_zero:.6e}')
