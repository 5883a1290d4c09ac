"""
Normalized cavity emission spectrum of a prepared state.
Run: python manage.py spectrum --config run.json --jobs 8
"""
import numpy as np

from cli.commands import SwingupCommand
from dynamics.simulation import simulate
from observables.spectrum import emission_spectrum
from swingup.exceptions import ConfigurationError


class Command(SwingupCommand):
    help = 'Time-integrated emission spectrum, frequencies relative to the cavity line'

    def run(self, run_config, **options):
        system = run_config.system
        if system.cavity is None:
            raise ConfigurationError("the spectrum needs a cavity section")
        settings = run_config.section('spectrum')
        start = system.pulse.start_time()
        outer = np.linspace(start, start + settings['window'], settings['n_outer'])
        model, traj = simulate(system, grid=outer, options=run_config.options)
        frequencies = np.linspace(settings['omega_min'], settings['omega_max'], settings['n_omega'])
        result = emission_spectrum(
            model, traj, frequencies, window=settings['window'], n_outer=settings['n_outer'],
            jobs=options.get('jobs'), options=run_config.options, converge=settings['converge'],
        )
        self.write_csv('spectrum.csv', ['omega_minus_delta_c', 'S'], result.rows(), run_config,
                       n_fock=traj.metadata.get('n_fock'), n_outer=result.n_outer)
        peaks = result.peaks()
        self.write_json('spectrum.json', {
            'peaks': peaks,
            'negative_excursion': result.negative_excursion,
            'window': result.window,
            'n_outer': result.n_outer,
            'delta_c': system.cavity.delta_c,
        }, run_config)
        self.stdout.write('Peaks at w - delta_c: ' + ', '.join(f'{peak:.3f}' for peak in peaks))
