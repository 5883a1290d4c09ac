"""
Convert lab units to simulation units (Gamma = 1).
Run: python manage.py convert_units --mev -5
"""
from rest_framework.exceptions import ValidationError

from cli.commands import SwingupCommand
from cli.outputs import format_value
from drive.units import unit_convert


class Command(SwingupCommand):
    help = 'Energy in meV or time in ps to scaled units'
    uses_config = False

    def add_command_arguments(self, parser):
        parser.add_argument('--mev', type=float, help='Energy in meV')
        parser.add_argument('--ps', type=float, help='Time in ps')

    def run(self, run_config, **options):
        given = [(unit, options[key]) for key, unit in (('mev', 'meV'), ('ps', 'ps')) if options.get(key) is not None]
        if len(given) != 1:
            raise ValidationError({'unit': ["give exactly one of --mev or --ps"]})
        unit, value = given[0]
        self.stdout.write(format_value(unit_convert(value, unit)))
