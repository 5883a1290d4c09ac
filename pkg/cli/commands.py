"""
Shared plumbing for the simulation management commands.

Every command reads the run configuration, applies the common flags,
runs, and writes its result files into the output directory. Errors are
written to stderr as one JSON object and mapped to exit statuses:
1 for invalid input, 2 for a numerical failure during the run.
"""
import json
import logging
from pathlib import Path

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError
from rest_framework.exceptions import ValidationError

from cli.config import apply_overrides, load_config, read_document
from cli.outputs import plain, run_metadata, write_csv, write_json
from swingup.exceptions import NUMERICAL_ERRORS, ConfigurationError

logger = logging.getLogger(__name__)

EXIT_VALIDATION = 1
EXIT_NUMERICAL = 2


class SwingupCommand(BaseCommand):
    requires_system_checks = []
    # Commands that need no configuration file at all
    uses_config = True

    def add_arguments(self, parser):
        parser.add_argument('--config', help='JSON run configuration (all defaults when omitted)')
        parser.add_argument('--out', help='Output directory (default: SWINGUP_OUTPUT_DIR)')
        parser.add_argument('--jobs', type=int, help='Worker processes (default: SWINGUP_JOBS)')
        parser.add_argument('--seed', type=int, help='Seed for disorder draws')
        parser.add_argument('--fock', type=int, help='Starting Fock cutoff of the cavity mode')
        parser.add_argument('--tol-rel', type=float, dest='tol_rel', help='Relative integrator tolerance')
        parser.add_argument('--set', action='append', dest='overrides', default=[], metavar='KEY=VALUE',
                            help='Override a configuration key, e.g. pulse.alpha1_pi=68.25')
        self.add_command_arguments(parser)

    def add_command_arguments(self, parser):
        pass

    def handle(self, *args, **options):
        try:
            run_config = self.load(options) if self.uses_config else None
            self.out_dir = self.output_dir(options, run_config)
            self.run(run_config, **options)
        except ValidationError as exc:
            self.fail(EXIT_VALIDATION, {'error': 'validation_error', 'message': "invalid configuration",
                                        'details': exc.detail})
        except ConfigurationError as exc:
            self.fail(EXIT_VALIDATION, exc.as_dict())
        except NUMERICAL_ERRORS as exc:
            self.fail(EXIT_NUMERICAL, exc.as_dict())

    def load(self, options):
        document = read_document(options['config']) if options.get('config') else {}
        document = apply_overrides(document, options.get('overrides'))
        flags = []
        if options.get('seed') is not None:
            flags.append(f"seed={options['seed']}")
        if options.get('tol_rel') is not None:
            flags.append(f"integrator.rtol={options['tol_rel']}")
        if options.get('fock') is not None:
            if document.get('cavity') is None:
                logger.warning("--fock ignored: the configuration has no cavity")
            else:
                flags.append(f"cavity.n_fock={options['fock']}")
        return load_config(apply_overrides(document, flags))

    def output_dir(self, options, run_config):
        if options.get('out'):
            return Path(options['out'])
        if run_config is not None and run_config.out:
            return Path(run_config.out)
        return Path(settings.SWINGUP_OUTPUT_DIR)

    def run(self, run_config, **options):
        raise NotImplementedError

    def fail(self, returncode, payload):
        self.stderr.write(json.dumps(plain(payload), sort_keys=True))
        raise CommandError(payload.get('message', 'run failed'), returncode=returncode)

    def metadata(self, run_config, **extra):
        return run_metadata(self.command_name, run_config, **extra)

    @property
    def command_name(self):
        return self.__module__.rsplit('.', 1)[-1]

    def write_csv(self, name, columns, rows, run_config, **extra):
        path = write_csv(self.out_dir / name, columns, rows, self.metadata(run_config, **extra))
        self.stdout.write(self.style.SUCCESS(f'Wrote {path}'))
        return path

    def write_json(self, name, payload, run_config, **extra):
        path = write_json(self.out_dir / name, payload, self.metadata(run_config, **extra))
        self.stdout.write(self.style.SUCCESS(f'Wrote {path}'))
        return path
