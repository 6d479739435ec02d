"""
Spectrum report: characteristic polynomial and roots of A, hyperbolicity,
stable/unstable splitting of B and the adapted-norm parameters.

Usage:
    python manage.py spectrum --config problem.json
    python manage.py gen companion --coeffs 1,2,3,0,-1,-2,1 | python manage.py spectrum --json

Exit code 2 when the matrix is not hyperbolic.
"""

from django.core.management.base import CommandError

from cohomology.constants import EXIT_SPECTRUM_NOT_HYPERBOLIC
from cohomology.management.base import ProblemCommand
from cohomology.reports import describe_map
from cohomology.serializers import SpectrumReportSerializer


class Command(ProblemCommand):
    help = 'Print the spectrum, splitting and adapted norm of the map in a ProblemConfig'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument(
            '--json',
            action='store_true',
            help='Emit the report as JSON (written to --out/spectrum.json when --out is given)',
        )

    def handle(self, *args, **options):
        problem = self.load_problem(options)
        report = self.run_domain(describe_map, problem.torus_map, self.band(options, problem))

        if options['json']:
            self.emit(SpectrumReportSerializer(report).data, options, 'spectrum.json')
        else:
            self.print_report(report)

        if not report.hyperbolic:
            raise CommandError('Matrix is not hyperbolic', returncode=EXIT_SPECTRUM_NOT_HYPERBOLIC)

    def print_report(self, report):
        self.stdout.write(f'Matrix A ({report.p}x{report.p}): {report.A}')
        self.stdout.write(f'Characteristic polynomial det(A - XI): {report.polynomial_text}')
        self.stdout.write('Roots:')
        for root in report.roots:
            self.stdout.write(
                f'  {root.value.real:+.15g} {root.value.imag:+.15g}i   '
                f'|λ| = {root.modulus:.15g}   multiplicity {root.multiplicity} '
                f'(geometric {root.geometric_multiplicity})'
            )

        if report.diagonalizable:
            self.stdout.write('Diagonalizable: yes')
        else:
            self.stdout.write(self.style.WARNING('Diagonalizable: no (algebraic multiplicity exceeds geometric)'))

        if not report.hyperbolic:
            self.stdout.write(self.style.ERROR('Hyperbolic: no'))
            return

        self.stdout.write(self.style.SUCCESS('Hyperbolic: yes'))
        self.stdout.write(
            f'Splitting of B: dim E- = {report.stable_rank}, dim E+ = {report.unstable_rank}, '
            f'rho- = {report.rho_minus:.15g}, rho+^-1 = {report.rho_plus_inv:.15g}'
        )
        self.stdout.write(
            f'Adapted norm: n = {report.n}, thetaMinus = {report.theta_minus:.15g}, '
            f'thetaPlusInv = {report.theta_plus_inv:.15g}, eta = {report.eta:.15g}, mu = {report.mu:.15g}'
        )
