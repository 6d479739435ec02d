"""
Check a candidate solution: residual ||delta(f) - g||_1,0.

Usage:
    python manage.py verify --config problem.json --solution result/f.json

Exit code 2 when the residual exceeds the tolerance.
"""

from django.core.management.base import CommandError
from rest_framework import serializers

from cohomology.constants import EXIT_CONFIG_ERROR, EXIT_OBSTRUCTED
from cohomology.fourier import coboundary, seminorm_1r
from cohomology.management.base import ProblemCommand
from cohomology.serializers import series_from_dict
from cohomology.utils import get_setting, read_json


class Command(ProblemCommand):
    help = 'Verify that f solves f - f o gamma = g within the tolerance'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument(
            '--solution',
            help='Series JSON of f (default: the "f" entry of the config)',
        )

    def handle(self, *args, **options):
        problem = self.load_problem(options)
        f = problem.f
        if options['solution']:
            try:
                f = series_from_dict(read_json(options['solution']))
            except (OSError, ValueError, serializers.ValidationError) as exc:
                raise CommandError(f'Cannot read solution: {exc}', returncode=EXIT_CONFIG_ERROR)
        if f is None:
            raise CommandError('No solution given: pass --solution or put "f" in the config', returncode=EXIT_CONFIG_ERROR)

        tol = self.tolerance(options, problem)
        tol = get_setting('TORUS_OBSTRUCTION_TOL') if tol is None else tol
        residual = self.run_domain(lambda: seminorm_1r(coboundary(f, problem.torus_map) - problem.g, 0))
        passed = residual <= tol

        self.emit({'residualNorm': residual, 'tol': tol, 'passed': passed}, options, 'verify.json')
        if passed:
            self.say(options, self.style.SUCCESS(f'✓ Residual {residual:.3e} <= {tol:.1e}'))
            return
        self.say(options, self.style.ERROR(f'✗ Residual {residual:.3e} > {tol:.1e}'))
        raise CommandError('Residual above tolerance', returncode=EXIT_OBSTRUCTED)
