from django.test import SimpleTestCase

from cohomology.fixtures import named_map
from cohomology.fourier import basis_mode, coboundary
from cohomology.serializers import problem_config
from cohomology.tasks import run_oracle_case, solve_problem_task


class OracleTaskTest(SimpleTestCase):
    def test_oracle_case_passes(self):
        """Test that a round trip task reports a pass"""
        result = run_oracle_case(2, 3, seed=1)
        self.assertEqual(result["status"], "pass")
        self.assertEqual(result["seed"], 1)
        self.assertLess(result["deviation"], 1e-9)
        self.assertTrue(result["continuity"])

    def test_oracle_case_runs_eagerly(self):
        """Test that delay() runs in-process with eager Celery"""
        result = run_oracle_case.delay(3, 2, 0).get()
        self.assertEqual(result["status"], "pass")
        self.assertEqual(result["p"], 3)

    def test_oracle_case_error_payload(self):
        """Test that domain errors come back as an error payload"""
        result = run_oracle_case(1, 2, 0)
        self.assertEqual(result["status"], "error")
        self.assertEqual(result["error"]["code"], "TORUS_301")


class SolveTaskTest(SimpleTestCase):
    def setUp(self):
        """Set up test data"""
        self.cat = named_map("cat", ["1/2", "0"])

    def test_solve_task(self):
        """Test that the solve task returns the solution and report payloads"""
        config = problem_config(self.cat, coboundary(basis_mode(2, (1, 1)), self.cat))
        result = solve_problem_task(config)
        self.assertEqual(result["status"], "success")
        self.assertEqual(result["f"]["terms"], [{"m": [1, 1], "re": 1.0, "im": 0.0}])
        self.assertEqual(result["report"]["termCount"], 1)

    def test_solve_task_obstructed(self):
        """Test that an obstructed problem returns the error code"""
        result = solve_problem_task(problem_config(self.cat, basis_mode(2, (1, 0))))
        self.assertEqual(result["status"], "error")
        self.assertEqual(result["error"]["code"], "TORUS_201")

    def test_solve_task_invalid_config(self):
        """Test that validation errors are returned, not raised"""
        result = solve_problem_task({"p": 2})
        self.assertEqual(result["status"], "error")
        self.assertIn("A", result["errors"])
