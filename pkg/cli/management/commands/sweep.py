"""
Final-population heatmaps over two pulse parameters.
Run: python manage.py sweep --config run.json --jobs 8
"""
from cli.commands import SwingupCommand
from sweep.grids import best_cell, run_heatmap


class Command(SwingupCommand):
    help = 'Grid two pulse parameters and record the final populations'

    def run(self, run_config, **options):
        grid = run_config.sweep
        heatmap = run_heatmap(grid, t_end=run_config.t_end, options=run_config.options, jobs=options.get('jobs'))
        axes = {'axis1': grid.axis1.as_dict(), 'axis2': grid.axis2.as_dict()}
        columns = [f'{grid.axis1.name}\\{grid.axis2.name}', *(f'{value:.12e}' for value in heatmap.axis2_values)]

        best = {}
        for target in grid.targets:
            rows = [[value, *cells] for value, cells in zip(heatmap.axis1_values, heatmap.values[target].tolist())]
            self.write_csv(f'heatmap_{target}.csv', columns, rows, run_config, target=target, **axes)
            best[target] = best_cell(heatmap, target).as_dict()
            self.stdout.write(f"Best {target}: {best[target]['value']:.6f} at {best[target]['axis_values']}")

        self.write_json('heatmap.json', {
            'config': run_config.as_dict(),
            'best_cell': best,
            'failures': heatmap.failures,
            **axes,
        }, run_config)
        if heatmap.failures:
            self.stdout.write(self.style.WARNING(f'{len(heatmap.failures)} grid points failed'))
