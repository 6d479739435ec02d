"""
Print a ProblemConfig for a built-in map.

Usage:
    python manage.py gen cat --b 1/2,0
    python manage.py gen companion --coeffs 1,2,3,0,-1,-2,1
    python manage.py gen random-unimodular --seed 7 --p 4 --coboundary-radius 2

g defaults to delta(Theta_(1,...,1)); --coboundary-radius R uses delta(h)
for a seeded random h supported in [-R, R]^p instead.
"""

from django.core.management.base import BaseCommand, CommandError

from cohomology.constants import EXIT_CONFIG_ERROR
from cohomology.errors import TorusCohomologyError
from cohomology.fixtures import NAMED_MATRICES, companion_map, default_rhs, named_map, random_unimodular
from cohomology.lattice_core import AffineTorusMap
from cohomology.serializers import problem_config
from cohomology.utils import dumps, write_json

COMPANION = 'companion'
RANDOM_UNIMODULAR = 'random-unimodular'


def _int_list(value):
    return [int(x) for x in value.split(',') if x.strip()]


def _str_list(value):
    return [x.strip() for x in value.split(',') if x.strip()]


class Command(BaseCommand):
    help = 'Generate a ProblemConfig for a built-in or random unimodular map'

    def add_arguments(self, parser):
        parser.add_argument(
            'kind',
            choices=sorted(NAMED_MATRICES) + [COMPANION, RANDOM_UNIMODULAR],
            help='Map to generate',
        )
        parser.add_argument(
            '--coeffs',
            type=_int_list,
            help='Ascending polynomial coefficients c0,...,cp for `companion`',
        )
        parser.add_argument(
            '--seed',
            type=int,
            default=0,
            help='Seed for random-unimodular and --coboundary-radius (default: 0)',
        )
        parser.add_argument(
            '--p',
            type=int,
            default=3,
            help='Dimension for random-unimodular (default: 3)',
        )
        parser.add_argument(
            '--b',
            type=_str_list,
            help='Translation as comma-separated rationals, e.g. 1/2,0 (default: zero)',
        )
        parser.add_argument(
            '--coboundary-radius',
            type=int,
            help='Use g = delta(h) for a random h supported in [-R, R]^p',
        )
        parser.add_argument('--out', help='Write the config to this file instead of stdout')

    def handle(self, *args, **options):
        try:
            torus_map = self.build_map(options)
            g = default_rhs(torus_map, options['coboundary_radius'], options['seed'])
        except TorusCohomologyError as exc:
            raise CommandError(f'{exc.code}: {exc.message}', returncode=exc.exit_code)

        config = problem_config(torus_map, g)
        if options['out']:
            write_json(options['out'], config)
            self.stdout.write(self.style.SUCCESS(f"✓ Wrote {options['out']}"))
        else:
            self.stdout.write(dumps(config), ending='')

    def build_map(self, options) -> AffineTorusMap:
        kind = options['kind']
        if kind == COMPANION:
            if not options['coeffs']:
                raise CommandError('`companion` needs --coeffs c0,...,cp', returncode=EXIT_CONFIG_ERROR)
            return companion_map(options['coeffs'], options['b'])
        if kind == RANDOM_UNIMODULAR:
            matrix = random_unimodular(options['seed'], options['p'])
            return AffineTorusMap.build(matrix.rows, options['b'])
        return named_map(kind, options['b'])
