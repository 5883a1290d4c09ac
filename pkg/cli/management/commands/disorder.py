"""
Static-disorder ensemble statistics.
Run: python manage.py disorder --config run.json --seed 42 --jobs 8
"""
from cli.commands import SwingupCommand
from disorder.ensembles import run_ensemble


class Command(SwingupCommand):
    help = 'Mean and standard error of observables over disorder samples'

    def run(self, run_config, **options):
        settings = run_config.section('disorder')
        spec = run_config.disorder
        result = run_ensemble(
            run_config.system, spec, observables=tuple(settings['observables']), t_end=run_config.t_end,
            n_points=run_config.n_points, decay_horizon=settings['decay_horizon'], options=run_config.options,
            jobs=options.get('jobs'),
        )
        self.write_csv('disorder.csv', ['sample', 'draw1', 'draw2', *result.observables], result.rows(), run_config,
                       kind=spec.kind, width=spec.width, seed=spec.seed)
        self.write_json('disorder.json', {
            'spec': spec.as_dict(),
            'mean': result.mean,
            'stderr': result.stderr,
            'n_ok': result.n_ok,
            'resamples': result.resamples,
            'failures': result.failures,
        }, run_config)
        for name in result.observables:
            self.stdout.write(f'{name}: {result.mean[name]:.6f} +- {result.stderr[name]:.6f}')
        if result.failures:
            self.stdout.write(self.style.WARNING(f'{len(result.failures)} samples failed'))
