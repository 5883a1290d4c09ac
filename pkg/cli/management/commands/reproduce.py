"""
Run the reference reproductions and print a pass/fail table.
Run: python manage.py reproduce --jobs 8
     python manage.py reproduce --only superradiant --only decay
"""
from cli.commands import EXIT_NUMERICAL, SwingupCommand
from cli.recipes import RECIPES, run_recipes


class Command(SwingupCommand):
    help = 'Reference preparations, decay, g2, spectrum and cavity checks'

    def add_command_arguments(self, parser):
        parser.add_argument('--only', action='append', choices=sorted(RECIPES), help='Run just these recipes')

    def run(self, run_config, **options):
        checks = run_recipes(options.get('only'), jobs=options.get('jobs'))
        width = max(len(check.name) for check in checks)
        for check in checks:
            line = f'{check.name:<{width}}  {check.value:.6g}  ({check.expected})'
            style = self.style.SUCCESS if check.passed else self.style.ERROR
            self.stdout.write(style(f"{'PASS' if check.passed else 'FAIL'}  {line}"))

        failed = [check.name for check in checks if not check.passed]
        self.write_json('reproduce.json', {'checks': [check.as_dict() for check in checks], 'failed': failed},
                        run_config)
        if failed:
            self.fail(EXIT_NUMERICAL, {'error': 'reproduction_failed', 'message': f'{len(failed)} checks failed',
                                       'details': {'failed': failed}})
        self.stdout.write(self.style.SUCCESS(f'All {len(checks)} checks passed'))
