"""
Long-time decay after preparation, with fitted collective rates.
Run: python manage.py decay --config run.json
"""
import numpy as np

from cli.commands import SwingupCommand
from collective.dressed import dressed_basis
from dynamics.simulation import POPULATION_LABELS, decay_grid, fit_decay_rate, population_series, simulate
from swingup.exceptions import ConfigurationError


class Command(SwingupCommand):
    help = 'Prepare, then follow the collective populations as they decay'

    def run(self, run_config, **options):
        system = run_config.system
        decay = run_config.section('decay')
        grid = decay_grid(system.pulse, t_end=run_config.t_end, horizon=decay['horizon'],
                          n_prepare=run_config.n_points, n_decay=decay['n_decay'])
        model, traj = simulate(system, grid=grid, options=run_config.options)
        series = population_series(traj, model.dressed)
        # Independent emitters lose their excitation at the bare rate
        reference = np.where(traj.times >= run_config.t_end, np.exp(-(traj.times - run_config.t_end)), 1.0)

        columns = ['t', *(f'P_{label}' for label in POPULATION_LABELS), 'independent']
        data = [traj.times, *(series[label] for label in POPULATION_LABELS), reference]
        self.write_csv('decay.csv', columns, [list(row) for row in zip(*data)], run_config)

        basis = dressed_basis(system.geom, system.pulse.delta1)
        fits = {}
        for label in ('+', '-'):
            try:
                rate, amplitude = fit_decay_rate(traj.times, series[label], start=decay['fit_start'],
                                                 stop=decay['fit_stop'])
            except (RuntimeError, ConfigurationError) as exc:
                self.stdout.write(self.style.WARNING(f'No decay fit for P_{label}: {exc}'))
                rate, amplitude = float('nan'), float('nan')
            fits[label] = {'rate': rate, 'amplitude': amplitude, 'expected_rate': basis.decay_rates[label]}
        self.write_json('decay.json', {'fits': fits, 'fit_window': [decay['fit_start'], decay['fit_stop']]},
                        run_config)
        for label, fit in fits.items():
            self.stdout.write(f"P_{label}: rate {fit['rate']:.6f} (collective {fit['expected_rate']:.6f})")
