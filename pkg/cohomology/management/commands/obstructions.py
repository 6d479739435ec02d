"""
Evaluate the obstruction functionals of g (`toruscohom check`).

Usage:
    python manage.py obstructions --config problem.json --out result/

Writes report.json; exit code 2 when some functional does not vanish.
"""

from django.core.management.base import CommandError

from cohomology.constants import EXIT_OBSTRUCTED, REPORT_FILENAME
from cohomology.management.base import ProblemCommand
from cohomology.serializers import ObstructionReportSerializer
from cohomology.solver import analyze, check_obstructions


class Command(ProblemCommand):
    help = 'Check whether g is a coboundary: Phi_0(g) = 0 and Phi_m(g) = 0 on every orbit'

    def handle(self, *args, **options):
        problem = self.load_problem(options)
        system = self.run_domain(analyze, problem.torus_map, self.band(options, problem))
        report = self.run_domain(
            check_obstructions, problem.g, problem.torus_map, system.norm, self.tolerance(options, problem)
        )

        self.emit(ObstructionReportSerializer(report).data, options, REPORT_FILENAME)

        if report.solvable:
            self.say(options,
                self.style.SUCCESS(f'✓ Solvable: {len(report.orbit_checks)} orbit(s) checked, all functionals vanish')
            )
            return

        if not report.mean_passed:
            self.say(options, self.style.ERROR(f'✗ Phi_0(g) = {report.phi_zero} (g has nonzero mean)'))
        for check in report.failing:
            self.say(options,
                self.style.ERROR(f'✗ Orbit of {list(check.representative)}: |Phi_m(g)| = {check.magnitude:.6e}')
            )
        raise CommandError('g is not a coboundary', returncode=EXIT_OBSTRUCTED)
