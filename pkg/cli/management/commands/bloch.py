"""
Bloch vectors of the {G, j} sub-density matrices for several theta values.
Run: python manage.py bloch --config run.json
"""
import numpy as np

from cli.commands import SwingupCommand
from dynamics.simulation import simulate
from observables.bloch import bloch_trajectories


class Command(SwingupCommand):
    help = 'Bloch-vector trajectories during the preparation'

    def run(self, run_config, **options):
        settings = run_config.section('bloch')
        targets = settings['targets']
        columns = ['theta', 't']
        for target in targets:
            columns += [f'a{target}_x', f'a{target}_y', f'a{target}_z']

        rows, final = [], {}
        for theta in settings['thetas']:
            system = run_config.system
            system = system.replace(pulse=system.pulse.replace(theta=theta))
            model, traj = simulate(system, t_end=run_config.t_end, n_points=run_config.n_points,
                                   options=run_config.options)
            vectors = bloch_trajectories(traj, model.dressed, targets)
            stacked = np.hstack([vectors[target] for target in targets])
            rows += [[theta, t, *values] for t, values in zip(traj.times, stacked.tolist())]
            final[f'{theta:.12e}'] = {target: vectors[target][-1] for target in targets}
        self.write_csv('bloch.csv', columns, rows, run_config)
        self.write_json('bloch.json', {'final': final}, run_config)
