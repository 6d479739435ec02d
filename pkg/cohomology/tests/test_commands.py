import contextlib
import json
import tempfile
from io import StringIO
from pathlib import Path

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, override_settings

from toruscohom.__main__ import main


def run(name, *args, stdin=None):
    """Run a management command, returning (stdout, stderr)."""
    out, err = StringIO(), StringIO()
    kwargs = {"stdout": out, "stderr": err}
    if stdin is not None:
        kwargs["stdin"] = StringIO(stdin)
    call_command(name, *args, **kwargs)
    return out.getvalue(), err.getvalue()


def generate(*args):
    return run("gen", *args)[0]


class CommandTestCase(SimpleTestCase):
    def setUp(self):
        """Set up test data"""
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = Path(self.tmp.name)
        self.cat_config = generate("cat", "--b", "1/2,0")

    def tearDown(self):
        self.tmp.cleanup()

    def assertExitCode(self, code, name, *args, stdin=None):
        with self.assertRaises(CommandError) as ctx:
            run(name, *args, stdin=stdin)
        self.assertEqual(ctx.exception.returncode, code)
        return ctx.exception

    def write_config(self, config, filename="problem.json"):
        path = self.dir / filename
        path.write_text(config if isinstance(config, str) else json.dumps(config))
        return str(path)


class GenCommandTest(CommandTestCase):
    def test_cat_config(self):
        """Test that gen prints delta(Theta_(1,1)) for the cat map"""
        config = json.loads(self.cat_config)
        self.assertEqual(config["p"], 2)
        self.assertEqual(config["A"], [[1, 1], [1, 2]])
        self.assertEqual(config["b"], ["1/2", "0"])
        self.assertEqual([term["m"] for term in config["g"]["terms"]], [[1, 1], [2, 3]])

    def test_companion_config(self):
        """Test the companion map of the repeated-root polynomial"""
        config = json.loads(generate("companion", "--coeffs", "1,2,3,0,-1,-2,1"))
        self.assertEqual(config["p"], 6)
        self.assertEqual([row[-1] for row in config["A"]], [-1, -2, -3, 0, 1, 2])

    def test_companion_needs_coefficients(self):
        """Test that companion without --coeffs is a config error"""
        self.assertExitCode(1, "gen", "companion")

    def test_random_coboundary_is_seeded(self):
        """Test that the same seed gives the same config"""
        args = ("random-unimodular", "--p", "3", "--seed", "7", "--coboundary-radius", "1")
        self.assertEqual(generate(*args), generate(*args))


class SpectrumCommandTest(CommandTestCase):
    def test_text_report(self):
        """Test the human-readable report for the cat map"""
        out, _ = run("spectrum", stdin=self.cat_config)
        self.assertIn("Hyperbolic: yes", out)
        self.assertIn("n = 1", out)

    def test_json_report(self):
        """Test the JSON report for the repeated-root companion map"""
        config = generate("companion", "--coeffs", "1,2,3,0,-1,-2,1")
        report = json.loads(run("spectrum", "--json", stdin=config)[0])
        self.assertTrue(report["hyperbolic"])
        self.assertFalse(report["diagonalizable"])
        self.assertEqual([root["multiplicity"] for root in report["roots"]], [2, 2, 2])
        self.assertEqual([root["geometricMultiplicity"] for root in report["roots"]], [1, 1, 1])

    def test_not_hyperbolic(self):
        """Test that a rotation exits with 2"""
        self.assertExitCode(2, "spectrum", stdin=generate("rot2"))


class ObstructionsCommandTest(CommandTestCase):
    def test_solvable(self):
        """Test that a coboundary passes"""
        report = json.loads(run("obstructions", stdin=self.cat_config)[0])
        self.assertTrue(report["solvable"])

    def test_obstructed(self):
        """Test that Theta_(1,0) exits with 2 and writes a failing report"""
        config = json.loads(self.cat_config)
        config["g"] = [{"m": [1, 0], "re": 1.0}]
        self.assertExitCode(2, "obstructions", "--config", self.write_config(config), "--out", str(self.dir))
        report = json.loads((self.dir / "report.json").read_text())
        self.assertFalse(report["solvable"])
        self.assertEqual(len(report["orbitChecks"]), 1)

    def test_check_alias(self):
        """Test that `toruscohom check` runs the obstruction check"""
        config = json.loads(self.cat_config)
        config["g"] = [{"m": [1, 0], "re": 1.0}]
        path = self.write_config(config)
        with contextlib.redirect_stdout(StringIO()), contextlib.redirect_stderr(StringIO()):
            with self.assertRaises(SystemExit) as ctx:
                main(["toruscohom", "check", "--config", path])
        self.assertEqual(ctx.exception.code, 2)


class SolveCommandTest(CommandTestCase):
    def test_solve_writes_solution(self):
        """Test gen | solve on the cat map"""
        run("solve", "--out", str(self.dir), stdin=self.cat_config)
        solution = json.loads((self.dir / "f.json").read_text())
        self.assertEqual(solution, {"p": 2, "terms": [{"m": [1, 1], "re": 1.0, "im": 0.0}]})
        report = json.loads((self.dir / "report.json").read_text())
        self.assertEqual(report["status"], "success")
        self.assertLess(report["residualNorm"], 1e-9)

    def test_solve_to_stdout(self):
        """Test that without --out the solution and report go to stdout"""
        payload = json.loads(run("solve", stdin=self.cat_config)[0])
        self.assertEqual(payload["f"]["terms"][0]["m"], [1, 1])
        self.assertEqual(payload["report"]["termCount"], 1)

    def test_output_is_deterministic(self):
        """Test that repeated runs write byte-identical files"""
        config = generate("cat", "--b", "1/3,1/4", "--coboundary-radius", "3", "--seed", "5")
        first, second = self.dir / "first", self.dir / "second"
        run("solve", "--out", str(first), stdin=config)
        run("solve", "--out", str(second), stdin=config)
        for name in ("f.json", "report.json"):
            self.assertEqual((first / name).read_bytes(), (second / name).read_bytes())

    def test_obstructed(self):
        """Test that an obstructed g exits with 2 and still writes the report"""
        config = json.loads(self.cat_config)
        config["g"] = [{"m": [1, 0], "re": 1.0}]
        self.assertExitCode(2, "solve", "--out", str(self.dir), stdin=json.dumps(config))
        report = json.loads((self.dir / "report.json").read_text())
        self.assertFalse(report["obstructions"]["solvable"])
        self.assertFalse((self.dir / "f.json").exists())

    def test_not_hyperbolic(self):
        """Test that a rotation exits with 3"""
        self.assertExitCode(3, "solve", stdin=generate("rot2"))

    def test_invalid_config(self):
        """Test that malformed or missing configs exit with 1"""
        self.assertExitCode(1, "solve", stdin="{not json")
        self.assertExitCode(1, "solve", stdin=json.dumps({"p": 2}))
        self.assertExitCode(1, "solve", "--config", str(self.dir / "missing.json"))
        config = json.loads(self.cat_config)
        config["A"] = [[2, 0], [0, 2]]
        self.assertExitCode(1, "solve", stdin=json.dumps(config))

    def test_no_seed_flag(self):
        """Test that only gen and oracle take --seed"""
        for name in ("spectrum", "obstructions", "solve", "verify"):
            with self.assertRaises(CommandError, msg=name):
                run(name, "--seed", "1", stdin=self.cat_config)

    @override_settings(TORUS_ENUMERATION_CAP=10)
    def test_enumeration_cap(self):
        """Test that a candidate box above TORUS_ENUMERATION_CAP exits with 1 and reports TORUS_202"""
        error = self.assertExitCode(1, "solve", stdin=self.cat_config)
        self.assertIn("TORUS_202", str(error))


class VerifyCommandTest(CommandTestCase):
    def test_verify_solution(self):
        """Test that the solution written by solve verifies"""
        config_path = self.write_config(self.cat_config)
        run("solve", "--config", config_path, "--out", str(self.dir))
        out, _ = run("verify", "--config", config_path, "--solution", str(self.dir / "f.json"))
        self.assertTrue(json.loads(out)["passed"])

    def test_wrong_solution(self):
        """Test that a wrong f exits with 2"""
        config = json.loads(self.cat_config)
        config["f"] = [{"m": [1, 0], "re": 1.0}]
        self.assertExitCode(2, "verify", stdin=json.dumps(config))

    def test_missing_solution(self):
        """Test that verify needs some f"""
        self.assertExitCode(1, "verify", stdin=self.cat_config)


class SampleCommandTest(CommandTestCase):
    def test_grid_rows(self):
        """Test that sample writes N^2 rows of x1, x2, re, im"""
        path = self.dir / "f.json"
        path.write_text(json.dumps({"p": 2, "terms": [{"m": [1, 0], "re": 1.0, "im": 0.0}]}))
        out, _ = run("sample", "--series", str(path), "--grid", "4")
        rows = [line.split(",") for line in out.strip().splitlines()]
        self.assertEqual(len(rows), 16)
        self.assertEqual(rows[0], ["0.0", "0.0", "1.0", "0.0"])
        self.assertTrue(all(len(row) == 4 for row in rows))

    def test_needs_two_dimensions(self):
        """Test that only T^2 series can be sampled"""
        path = self.dir / "g.json"
        path.write_text(json.dumps({"p": 3, "terms": []}))
        self.assertExitCode(1, "sample", "--series", str(path))


class OracleCommandTest(SimpleTestCase):
    def test_small_suite(self):
        """Test that five seeds on T^2 all pass"""
        out, _ = run("oracle", "--p", "2", "--box-radius", "3", "--seeds", "5")
        self.assertIn("5/5 pass", out)

    def test_bad_arguments(self):
        """Test that nonsensical suite sizes are config errors"""
        with self.assertRaises(CommandError) as ctx:
            run("oracle", "--seeds", "0")
        self.assertEqual(ctx.exception.returncode, 1)
