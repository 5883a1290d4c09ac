"""
Population surfaces over time and the relative optical phase theta.
Run: python manage.py phase_sweep --config run.json --n-theta 21
"""
from cli.commands import SwingupCommand
from dynamics.simulation import POPULATION_LABELS
from sweep.grids import run_phase_sweep


class Command(SwingupCommand):
    help = 'Repeat the preparation over a grid of theta in (-pi, pi]'

    def add_command_arguments(self, parser):
        parser.add_argument('--n-theta', type=int, dest='n_theta', help='Grid points (default from config)')

    def run(self, run_config, **options):
        n_theta = options.get('n_theta') or run_config.section('sweep')['n_theta']
        result = run_phase_sweep(run_config.system, n_theta=n_theta, t_end=run_config.t_end,
                                 n_points=run_config.n_points, options=run_config.options, jobs=options.get('jobs'))
        rows = [
            [theta, t, *(result.surfaces[label][row, column] for label in POPULATION_LABELS)]
            for row, theta in enumerate(result.thetas)
            for column, t in enumerate(result.times)
        ]
        self.write_csv('phase_sweep.csv', ['theta', 't', *(f'P_{label}' for label in POPULATION_LABELS)],
                       rows, run_config)
        self.write_json('phase_sweep.json', {
            'theta': result.thetas,
            'final': {f'P_{label}': result.final(label) for label in POPULATION_LABELS},
            'failures': result.failures,
        }, run_config)
