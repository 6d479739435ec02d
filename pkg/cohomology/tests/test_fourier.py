import numpy as np
from django.test import SimpleTestCase

from cohomology.errors import DimensionMismatch, InvalidProblem
from cohomology.fixtures import named_map, random_trig_polynomial
from cohomology.fourier import (
    FourierSeries,
    basis_mode,
    coboundary,
    evaluate,
    evaluate_grid,
    from_samples,
    pullback,
    seminorm_1r,
)


class FourierSeriesTest(SimpleTestCase):
    def test_basis_mode(self):
        """Test that basis_mode stores a single amplitude"""
        h = basis_mode(2, (1, -1), 2 + 1j)
        self.assertEqual(h.terms(), [((1, -1), 2 + 1j)])
        self.assertEqual(len(basis_mode(2, (1, 0), 0)), 0)

    def test_terms_sorted_and_summed(self):
        """Test lexicographic order and merging of repeated frequencies"""
        h = FourierSeries.from_terms(2, [((1, 0), 1), ((-1, 2), 2), ((1, 0), 3)])
        self.assertEqual(h.support, ((-1, 2), (1, 0)))
        self.assertEqual(h[(1, 0)], 4)
        self.assertEqual(h[(5, 5)], 0)

    def test_algebra(self):
        """Test sums, differences, scaling and cancellation"""
        a = basis_mode(2, (1, 0)) + basis_mode(2, (0, 1), 2)
        b = basis_mode(2, (1, 0), -1)
        self.assertEqual((a + b).terms(), [((0, 1), 2)])
        self.assertFalse(a - a)
        self.assertEqual((2 * a)[(0, 1)], 4)

    def test_product_is_convolution(self):
        """Test that the product of two modes is the mode of the sum of frequencies"""
        product = basis_mode(2, (1, 2), 3) * basis_mode(2, (-1, 1), 2j)
        self.assertEqual(product.terms(), [((0, 3), 6j)])

    def test_dimension_mismatch(self):
        """Test that series of different dimension cannot be combined"""
        with self.assertRaises(DimensionMismatch):
            basis_mode(2, (1, 0)) + basis_mode(3, (1, 0, 0))
        with self.assertRaises(DimensionMismatch):
            FourierSeries(2, {(1, 2, 3): 1})
        with self.assertRaises(DimensionMismatch):
            pullback(basis_mode(3, (1, 0, 0)), named_map("cat"))

    def test_is_real(self):
        """Test Hermitian symmetry detection"""
        real = basis_mode(2, (1, 2), 1 + 1j) + basis_mode(2, (-1, -2), 1 - 1j)
        self.assertTrue(real.is_real())
        self.assertFalse(basis_mode(2, (1, 2)).is_real())


class PullbackTest(SimpleTestCase):
    def setUp(self):
        """Set up test data"""
        self.cat = named_map("cat", ["1/2", "0"])
        self.cubic = named_map("cubic3", ["1/3", "0", "1/4"])
        self.rng = np.random.default_rng(11)

    def test_identity_power(self):
        """Test that pulling back by gamma^0 changes nothing"""
        h = random_trig_polynomial(2, 3, self.rng)
        self.assertEqual(pullback(h, self.cat, 0), h)

    def test_cat_example(self):
        """Test Theta_(1,0) o gamma = -Theta_(1,1) for b = (1/2, 0)"""
        result = pullback(basis_mode(2, (1, 0)), self.cat, 1)
        self.assertEqual(result.terms(), [((1, 1), -1)])

    def test_round_trip(self):
        """Test that pulling back by gamma then gamma^{-1} restores h"""
        for torus_map in (self.cat, self.cubic):
            h = random_trig_polynomial(torus_map.p, 3, self.rng)
            back = pullback(pullback(h, torus_map, 1), torus_map, -1)
            self.assertLess(back.max_deviation(h), 1e-12)

    def test_composition(self):
        """Test that pullback by k then l equals pullback by k + l"""
        h = random_trig_polynomial(3, 2, self.rng)
        for k in range(-2, 3):
            for l in range(-2, 3):
                twice = pullback(pullback(h, self.cubic, k), self.cubic, l)
                self.assertLess(twice.max_deviation(pullback(h, self.cubic, k + l)), 1e-12)

    def test_pointwise_consistency(self):
        """Test (h o gamma^k)(x) = h(gamma^k(x)) at random points"""
        for torus_map in (self.cat, self.cubic):
            h = random_trig_polynomial(torus_map.p, 2, self.rng)
            for k in range(-3, 4):
                moved = pullback(h, torus_map, k)
                for x in self.rng.uniform(0, 1, size=(5, torus_map.p)):
                    self.assertAlmostEqual(evaluate(moved, x), evaluate(h, torus_map.apply(x, k)), places=9)

    def test_algebra_morphism(self):
        """Test that pullback commutes with products"""
        h1 = random_trig_polynomial(2, 2, self.rng, terms=3)
        h2 = random_trig_polynomial(2, 2, self.rng, terms=3)
        left = pullback(h1 * h2, self.cat, 1)
        right = pullback(h1, self.cat, 1) * pullback(h2, self.cat, 1)
        self.assertLess(left.max_deviation(right), 1e-12)

    def test_preserves_real_functions(self):
        """Test that real-valued series stay real under pullback and coboundary"""
        h = basis_mode(2, (1, 2), 1 + 2j) + basis_mode(2, (-1, -2), 1 - 2j)
        self.assertTrue(pullback(h, self.cat, 3).is_real())
        self.assertTrue(coboundary(h, self.cat).is_real())


class CoboundaryTest(SimpleTestCase):
    def setUp(self):
        """Set up test data"""
        self.cat = named_map("cat", ["1/2", "0"])
        self.rng = np.random.default_rng(5)

    def test_cat_example(self):
        """Test delta(Theta_(1,1)) = Theta_(1,1) + Theta_(2,3)"""
        g = coboundary(basis_mode(2, (1, 1)), self.cat)
        self.assertEqual(g.terms(), [((1, 1), 1), ((2, 3), 1)])

    def test_constants_are_cocycles(self):
        """Test that delta kills constants"""
        self.assertFalse(coboundary(basis_mode(2, (0, 0), 3.5), self.cat))

    def test_coboundaries_have_mean_zero(self):
        """Test that delta(h) has no constant term"""
        for _ in range(10):
            h = random_trig_polynomial(2, 4, self.rng) + basis_mode(2, (0, 0), 2.0)
            self.assertEqual(coboundary(h, self.cat).mean, 0)

    def test_transport_relation(self):
        """Test delta(h) o gamma^k = h o gamma^k - h o gamma^{k+1}"""
        h = random_trig_polynomial(2, 3, self.rng)
        g = coboundary(h, self.cat)
        for k in range(-3, 4):
            expected = pullback(h, self.cat, k) - pullback(h, self.cat, k + 1)
            self.assertLess(pullback(g, self.cat, k).max_deviation(expected), 1e-12)


class SeminormTest(SimpleTestCase):
    def test_examples(self):
        """Test ||.||_{1,r} on small series"""
        self.assertEqual(seminorm_1r(FourierSeries.zero(2), 3), 0.0)
        self.assertEqual(seminorm_1r(basis_mode(2, (1, 1), 2), 3), 16.0)
        h = basis_mode(2, (0, 0), -3) + basis_mode(2, (1, -2), 2)
        self.assertEqual(seminorm_1r(h, 0), 5.0)
        self.assertEqual(seminorm_1r(h, 2), 3.0 + 2.0 * 9)

    def test_monotone_in_r(self):
        """Test that the seminorm grows with r"""
        h = random_trig_polynomial(3, 3, np.random.default_rng(1))
        values = [seminorm_1r(h, r) for r in range(5)]
        self.assertEqual(values, sorted(values))

    def test_negative_order(self):
        """Test that r < 0 is rejected"""
        with self.assertRaises(InvalidProblem):
            seminorm_1r(basis_mode(2, (1, 0)), -1)


class EvaluationTest(SimpleTestCase):
    def test_basis_values(self):
        """Test point values of Theta_(1,0)"""
        h = basis_mode(2, (1, 0))
        self.assertAlmostEqual(evaluate(h, (0.25, 0.7)), 1j, places=12)
        self.assertAlmostEqual(evaluate(h, (0.5, 0.1)), -1, places=12)
        self.assertEqual(evaluate(basis_mode(2, (0, 0), 4), (0.3, 0.9)), 4)

    def test_grid_matches_points(self):
        """Test that grid evaluation agrees with pointwise evaluation"""
        rng = np.random.default_rng(3)
        h = random_trig_polynomial(2, 3, rng)
        points = rng.uniform(0, 1, size=(20, 2))
        values = evaluate_grid(h, points)
        for x, value in zip(points, values):
            self.assertAlmostEqual(evaluate(h, x), value, places=12)
        np.testing.assert_array_equal(evaluate_grid(FourierSeries.zero(2), points), np.zeros(20))


class SampleIngestionTest(SimpleTestCase):
    def setUp(self):
        """Set up test data"""
        self.h = basis_mode(2, (1, -2), 1.5 - 0.5j) + basis_mode(2, (0, 3), 2j) + basis_mode(2, (0, 0), 0.25)
        axis = np.arange(16) / 16
        x1, x2 = np.meshgrid(axis, axis, indexing="ij")
        self.grid = evaluate_grid(self.h, np.stack([x1.ravel(), x2.ravel()], axis=1)).reshape(16, 16)

    def test_recovers_trig_polynomial(self):
        """Test that samples of a trigonometric polynomial give back its coefficients"""
        series, tail = from_samples(self.grid, radius=3, threshold=1e-12)
        self.assertLess(series.max_deviation(self.h), 1e-12)
        self.assertEqual(set(series.support), set(self.h.support))
        self.assertLess(tail, 1e-12)

    def test_reports_truncated_tail(self):
        """Test that modes beyond the radius are dropped and counted in the tail"""
        series, tail = from_samples(self.grid, radius=2, threshold=1e-12)
        self.assertEqual(series[(0, 3)], 0)
        self.assertAlmostEqual(tail, 2.0, places=10)

    def test_radius_needs_enough_samples(self):
        """Test that 2 * radius must stay below the grid size"""
        with self.assertRaises(InvalidProblem):
            from_samples(self.grid, radius=8)
        with self.assertRaises(InvalidProblem):
            from_samples(np.zeros((4, 5)), radius=1)
