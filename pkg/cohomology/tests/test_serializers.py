import json
import tempfile
from fractions import Fraction
from pathlib import Path

import numpy as np
from django.test import SimpleTestCase
from rest_framework import serializers

from cohomology.errors import NotUnimodular
from cohomology.fixtures import named_map
from cohomology.fourier import FourierSeries, basis_mode, coboundary, evaluate_grid
from cohomology.serializers import (
    ObstructionReportSerializer,
    ProblemConfigSerializer,
    SolveResultSerializer,
    problem_config,
    series_from_dict,
    series_to_dict,
)
from cohomology.solver import analyze, check_obstructions, solve


class SeriesSerializerTest(SimpleTestCase):
    def test_series_format(self):
        """Test the series payload layout and term order"""
        series = basis_mode(2, (1, 0), 2 - 1j) + basis_mode(2, (-1, 3), 0.5)
        self.assertEqual(
            series_to_dict(series),
            {
                "p": 2,
                "terms": [
                    {"m": [-1, 3], "re": 0.5, "im": 0.0},
                    {"m": [1, 0], "re": 2.0, "im": -1.0},
                ],
            },
        )

    def test_series_from_dict(self):
        """Test reading a series payload, im defaulting to 0"""
        series = series_from_dict({"p": 2, "terms": [{"m": [1, 1], "re": 1}, {"m": [2, 3], "re": 0, "im": 2}]})
        self.assertEqual(series.terms(), [((1, 1), 1), ((2, 3), 2j)])

    def test_invalid_series(self):
        """Test that frequencies of the wrong length are rejected"""
        with self.assertRaises(serializers.ValidationError):
            series_from_dict({"p": 2, "terms": [{"m": [1, 1, 1], "re": 1}]})
        with self.assertRaises(serializers.ValidationError):
            series_from_dict({"p": 2, "terms": [{"m": [1, 1]}]})


class ProblemConfigSerializerTest(SimpleTestCase):
    def setUp(self):
        """Set up test data"""
        self.config = {
            "p": 2,
            "A": [[1, 1], [1, 2]],
            "b": ["1/2", "0.25"],
            "g": [{"m": [1, 1], "re": 1.0, "im": 0.0}],
            "tol": 1e-10,
            "hyperbolicityBand": 1e-6,
        }

    def load(self, data, base_dir="."):
        serializer = ProblemConfigSerializer(data=data, context={"base_dir": base_dir})
        self.assertTrue(serializer.is_valid(), serializer.errors)
        return serializer.save()

    def test_inline_terms(self):
        """Test a config with inline terms and rational translation"""
        problem = self.load(self.config)
        self.assertEqual(problem.torus_map.b, (Fraction(1, 2), Fraction(1, 4)))
        self.assertEqual(problem.g.terms(), [((1, 1), 1)])
        self.assertEqual(problem.tol, 1e-10)
        self.assertEqual(problem.hyperbolicity_band, 1e-6)
        self.assertIsNone(problem.f)

    def test_default_translation(self):
        """Test that a missing b means b = 0"""
        del self.config["b"]
        self.assertTrue(self.load(self.config).torus_map.is_linear)

    def test_series_file_path(self):
        """Test that g may point to a series file relative to the config"""
        with tempfile.TemporaryDirectory() as directory:
            Path(directory, "g.json").write_text(json.dumps(series_to_dict(basis_mode(2, (2, 3), 4))))
            self.config["g"] = "g.json"
            problem = self.load(self.config, base_dir=directory)
        self.assertEqual(problem.g.terms(), [((2, 3), 4)])

    def test_sampled_input(self):
        """Test that g may be sampled data, with the truncation tail recorded"""
        h = basis_mode(2, (1, 0)) + basis_mode(2, (0, 5), 0.5)
        axis = np.arange(16) / 16
        x1, x2 = np.meshgrid(axis, axis, indexing="ij")
        grid = evaluate_grid(h, np.stack([x1.ravel(), x2.ravel()], axis=1)).reshape(16, 16)
        with tempfile.TemporaryDirectory() as directory:
            np.save(Path(directory, "g.npy"), grid)
            self.config["g"] = {"samples": "g.npy", "radius": 3}
            problem = self.load(self.config, base_dir=directory)
        self.assertAlmostEqual(problem.g[(1, 0)], 1, places=12)
        self.assertEqual(problem.g[(0, 5)], 0)
        self.assertAlmostEqual(problem.input_tail, 0.5, places=10)

    def test_invalid_configs(self):
        """Test that malformed configs report field errors"""
        cases = [
            ({"A": [[1, 1], [1, 2], [0, 0]]}, "A"),
            ({"b": ["1/2"]}, "b"),
            ({"b": ["x", "0"]}, "b"),
            ({"g": [{"m": [1, 1, 1], "re": 1}]}, "g"),
            ({"g": "missing.json"}, "g"),
            ({"p": 1}, "p"),
        ]
        for change, field in cases:
            serializer = ProblemConfigSerializer(data={**self.config, **change})
            self.assertFalse(serializer.is_valid(), change)
            self.assertIn(field, serializer.errors, change)

    def test_not_unimodular(self):
        """Test that the map is validated when the problem is built"""
        serializer = ProblemConfigSerializer(data={**self.config, "A": [[2, 0], [0, 2]]})
        self.assertTrue(serializer.is_valid())
        with self.assertRaises(NotUnimodular):
            serializer.save()

    def test_problem_config_round_trip(self):
        """Test that generated configs load back to the same problem"""
        torus_map = named_map("cubic3", ["1/3", "0", "1/4"])
        g = coboundary(basis_mode(3, (1, 1, 1)), torus_map)
        problem = self.load(json.loads(json.dumps(problem_config(torus_map, g))))
        self.assertEqual(problem.torus_map, torus_map)
        self.assertEqual(problem.g.max_deviation(g), 0.0)


class ReportSerializerTest(SimpleTestCase):
    def setUp(self):
        """Set up test data"""
        self.cat = named_map("cat", ["1/2", "0"])
        self.nm = analyze(self.cat).norm

    def test_obstruction_report(self):
        """Test the obstruction report payload"""
        data = ObstructionReportSerializer(check_obstructions(basis_mode(2, (1, 0)), self.cat, self.nm)).data
        self.assertEqual(list(data), ["solvable", "tol", "phiZero", "meanPassed", "orbitChecks"])
        self.assertFalse(data["solvable"])
        self.assertEqual(data["phiZero"], {"re": 0.0, "im": 0.0})
        self.assertEqual(len(data["orbitChecks"]), 1)
        self.assertFalse(data["orbitChecks"][0]["passed"])

    def test_solve_report(self):
        """Test the solve report payload"""
        g = coboundary(basis_mode(2, (1, 1)), self.cat)
        data = SolveResultSerializer(solve(g, self.cat, nm=self.nm)).data
        self.assertEqual(data["status"], "success")
        self.assertEqual(data["termCount"], 1)
        self.assertEqual([row["r"] for row in data["continuity"]], [0, 1, 2])
        self.assertTrue(all(row["holdsCorrected"] for row in data["continuity"]))
        self.assertTrue(data["obstructions"]["solvable"])
        self.assertEqual(
            list(data["continuity"][0]),
            ["r", "lhs", "rhsTruncated", "rhsCorrected", "holdsTruncated", "holdsCorrected"],
        )

    def test_empty_series(self):
        """Test that the zero series serializes with no terms"""
        self.assertEqual(series_to_dict(FourierSeries.zero(3)), {"p": 3, "terms": []})
