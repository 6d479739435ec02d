"""
Round-trip suite: for each seed draw h, solve delta(h) and compare with h.

Usage:
    python manage.py oracle --p 2 --box-radius 4 --seeds 50

Seeds run as Celery tasks (in-process with CELERY_TASK_ALWAYS_EAGER).
Prints "N/N pass"; exit code 4 when any seed fails.
"""

import logging

from celery import group
from django.core.management.base import BaseCommand, CommandError

from cohomology.constants import EXIT_CONFIG_ERROR, EXIT_ORACLE_FAILURE
from cohomology.tasks import run_oracle_case

logger = logging.getLogger(__name__)


class Command(BaseCommand):
    help = 'Run the solve(delta(h)) = h - mean(h) round trip over random seeds'

    def add_arguments(self, parser):
        parser.add_argument(
            '--p',
            type=int,
            default=2,
            help='Torus dimension: cat map for 2, cubic3 for 3, random unimodular above (default: 2)',
        )
        parser.add_argument(
            '--box-radius',
            type=int,
            default=4,
            help='h is supported in [-R, R]^p (default: 4)',
        )
        parser.add_argument(
            '--seeds',
            type=int,
            default=50,
            help='Number of seeds (default: 50)',
        )
        parser.add_argument(
            '--seed',
            type=int,
            default=0,
            help='First seed (default: 0)',
        )
        parser.add_argument(
            '--terms',
            type=int,
            default=6,
            help='Frequencies per random h (default: 6)',
        )
        parser.add_argument(
            '--tol',
            type=float,
            help='Deviation and residual tolerance (default: TORUS_OBSTRUCTION_TOL)',
        )
        parser.add_argument(
            '--verbose-seeds',
            action='store_true',
            help='Print one line per seed',
        )

    def handle(self, *args, **options):
        p = options['p']
        if p < 2 or options['seeds'] < 1 or options['box_radius'] < 1:
            raise CommandError('Need p >= 2, --seeds >= 1 and --box-radius >= 1', returncode=EXIT_CONFIG_ERROR)

        seeds = range(options['seed'], options['seed'] + options['seeds'])
        self.stdout.write(f"Running {len(seeds)} round trip(s) on T^{p}, h in [-{options['box_radius']}, {options['box_radius']}]^{p}...")

        jobs = group(
            run_oracle_case.s(p, options['box_radius'], seed, options['terms'], options['tol'])
            for seed in seeds
        )
        outcomes = [child.get() for child in jobs.apply_async().results]

        passed = [outcome for outcome in outcomes if outcome['status'] == 'pass']
        for outcome in outcomes:
            if outcome['status'] == 'pass' and not options['verbose_seeds']:
                continue
            if outcome['status'] == 'error':
                line = f"seed {outcome['seed']}: error {outcome['error']['code']} {outcome['error']['message']}"
            else:
                line = (
                    f"seed {outcome['seed']}: {outcome['status']} deviation={outcome['deviation']:.3e} "
                    f"residual={outcome['residual']:.3e} continuity={outcome['continuity']}"
                )
            style = self.style.SUCCESS if outcome['status'] == 'pass' else self.style.ERROR
            self.stdout.write(style(line))

        summary = f'{len(passed)}/{len(outcomes)} pass'
        if len(passed) == len(outcomes):
            self.stdout.write(self.style.SUCCESS(summary))
            return
        self.stdout.write(self.style.ERROR(summary))
        raise CommandError(summary, returncode=EXIT_ORACLE_FAILURE)
