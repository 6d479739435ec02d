"""
Solve f - f o gamma = g.

Usage:
    python manage.py solve --config problem.json --out result/

Writes result/f.json (the mean-zero solution) and result/report.json.
Exit code 2 if g is obstructed (report.json still written) or if the
residual of the solution exceeds the tolerance, 3 if A is not hyperbolic.
"""

from django.core.management.base import CommandError

from cohomology.constants import EXIT_OBSTRUCTED, REPORT_FILENAME, SOLUTION_FILENAME
from cohomology.errors import ObstructionViolated, TorusCohomologyError
from cohomology.management.base import ProblemCommand
from cohomology.serializers import ObstructionReportSerializer, SolveResultSerializer, series_to_dict
from cohomology.solver import SUCCESS, analyze, solve


class Command(ProblemCommand):
    help = 'Solve the cohomological equation and write the solution series and the solve report'

    def handle(self, *args, **options):
        problem = self.load_problem(options)
        system = self.run_domain(analyze, problem.torus_map, self.band(options, problem))

        try:
            result = solve(
                problem.g,
                problem.torus_map,
                nm=system.norm,
                tol=self.tolerance(options, problem),
                input_tail=problem.input_tail,
            )
        except ObstructionViolated as exc:
            self.emit({'obstructions': ObstructionReportSerializer(exc.report).data}, options, REPORT_FILENAME)
            self.fail(exc)
        except TorusCohomologyError as exc:
            self.fail(exc)

        solution = series_to_dict(result.f)
        report = SolveResultSerializer(result).data
        if options.get('out'):
            self.emit(solution, options, SOLUTION_FILENAME)
            self.emit(report, options, REPORT_FILENAME)
        else:
            self.emit({'f': solution, 'report': report}, options, REPORT_FILENAME)

        self.say(options, '\n' + '=' * 50)
        self.say(options, 'SOLVE SUMMARY')
        self.say(options, '=' * 50)
        self.say(options, f'Terms in f: {len(result.f)}')
        self.say(options, f'Candidates in adapted ball: {result.candidate_count} (|m|_1 <= {result.box_radius})')
        self.say(options, f'Residual ||delta(f) - g||_1,0: {result.residual_norm:.3e}')
        for row in result.continuity:
            self.say(options,
                f'r={row.r}: ||f||_1,r = {row.lhs:.6g} <= {row.rhs_corrected:.6g} '
                f'({"holds" if row.holds_corrected else "VIOLATED"})'
            )

        if result.status != SUCCESS:
            self.say(options, self.style.WARNING(f'⚠ Residual above tolerance ({result.status})'))
            raise CommandError('Residual above tolerance', returncode=EXIT_OBSTRUCTED)
        self.say(options, self.style.SUCCESS('✓ Solved'))
