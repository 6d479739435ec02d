"""
Shared plumbing for the cohomology management commands: common flags,
ProblemConfig loading (file or stdin) and domain-error translation.
"""

import json
import logging
import sys
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from cohomology.constants import EXIT_CONFIG_ERROR
from cohomology.errors import TorusCohomologyError
from cohomology.serializers import ProblemConfigSerializer
from cohomology.utils import dumps, write_json

logger = logging.getLogger(__name__)


class ProblemCommand(BaseCommand):
    """Base class for commands reading a ProblemConfig via --config"""

    # call_command(..., stdin=StringIO(...)) feeds `--config -` in tests
    stealth_options = ("stdin",)

    def add_arguments(self, parser):
        parser.add_argument(
            '--config',
            default='-',
            help="Path to the ProblemConfig JSON, '-' reads stdin (default: -)",
        )
        parser.add_argument(
            '--tol',
            type=float,
            help='Obstruction / residual tolerance (default: config tol, then TORUS_OBSTRUCTION_TOL)',
        )
        parser.add_argument(
            '--band',
            type=float,
            help='Hyperbolicity band around the unit circle (default: config, then TORUS_HYPERBOLICITY_BAND)',
        )
        parser.add_argument(
            '--out',
            help='Directory for report files (default: print to stdout)',
        )

    def read_config(self, options):
        source = options['config']
        try:
            if source == '-':
                stream = options.get('stdin') or sys.stdin
                return json.loads(stream.read()), Path('.')
            path = Path(source)
            return json.loads(path.read_text(encoding='utf-8')), path.parent
        except (OSError, ValueError) as exc:
            raise CommandError(f'Cannot read config {source}: {exc}', returncode=EXIT_CONFIG_ERROR)

    def load_problem(self, options):
        data, base_dir = self.read_config(options)
        serializer = ProblemConfigSerializer(data=data, context={'base_dir': base_dir})
        if not serializer.is_valid():
            raise CommandError(
                f'Invalid config: {json.dumps(serializer.errors)}',
                returncode=EXIT_CONFIG_ERROR,
            )
        problem = self.run_domain(serializer.save)
        logger.info(f"Loaded problem on T^{problem.torus_map.p} with {len(problem.g)} term(s)")
        return problem

    @staticmethod
    def tolerance(options, problem):
        return options['tol'] if options['tol'] is not None else problem.tol

    @staticmethod
    def band(options, problem):
        return options['band'] if options['band'] is not None else problem.hyperbolicity_band

    def run_domain(self, func, *args, **kwargs):
        """Call into the library, turning domain errors into CommandError with their exit code"""
        try:
            return func(*args, **kwargs)
        except TorusCohomologyError as exc:
            self.fail(exc)

    def fail(self, exc: TorusCohomologyError):
        logger.error(f"{exc.code}: {exc.message}")
        self.stderr.write(dumps(exc.as_dict()), ending='')
        raise CommandError(f'{exc.code}: {exc.message}', returncode=exc.exit_code)

    def emit(self, payload, options, filename):
        """Write a JSON payload to --out/filename, or to stdout"""
        if options.get('out'):
            path = write_json(Path(options['out']) / filename, payload)
            self.stdout.write(self.style.SUCCESS(f'✓ Wrote {path}'))
            return path
        self.stdout.write(dumps(payload), ending='')
        return None

    def say(self, options, message):
        """Human-readable progress; goes to stderr when stdout carries the JSON payload"""
        stream = self.stdout if options.get('out') else self.stderr
        stream.write(message)
