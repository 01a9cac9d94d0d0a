import itertools
import math
import unittest
from functools import partial

import numpy as np

from glt_spectra.analysis import (
    LAPLACE_2D_BOUND,
    attraction_report,
    laplace2d_gap,
    l1_case_stats,
    max_relative_error,
    necessary_condition_check,
    necessary_condition_gap,
    relative_errors,
    saturation_constant,
    weyl_consistency,
)
from glt_spectra.errors import ConfigError
from glt_spectra.models import GridName, Method
from glt_spectra.symbol import euler_cauchy_omega


class TestErrorFunctionals(unittest.TestCase):

    def test_saturation_constant(self):
        self.assertAlmostEqual(float(saturation_constant(4 * math.pi ** 2, 1)), 0.5, places=15)
        self.assertAlmostEqual(float(saturation_constant(4 * math.pi ** 2, 2)), 0.2, places=15)
        self.assertAlmostEqual(float(saturation_constant(1.0, 10)) / 2.5324e-4, 1.0, places=4)
        with self.assertRaises(ConfigError):
            saturation_constant(-1.0, 1)

    def test_relative_errors_vanish_on_exact_data(self):
        n = 10
        k = np.arange(1, n + 1)
        reference = (k * math.pi) ** 2
        report = relative_errors(reference, reference, lambda x: (x * math.pi) ** 2, n)
        self.assertEqual(report.max_err, 0.0)
        self.assertEqual(report.k, k.tolist())
        np.testing.assert_allclose(report.analytic_err, 0.0, atol=1e-12)

    def test_max_relative_error(self):
        err, k = max_relative_error([1.0, 2.2, 3.0], [1.0, 2.0, 3.0])
        self.assertAlmostEqual(err, 0.1)
        self.assertEqual(k, 2)

    def test_gap_of_ideal_rearrangement(self):
        report = necessary_condition_gap(lambda x: (x * math.pi) ** 2, 1.0)
        self.assertLess(report.gap, 1e-14)
        self.assertEqual(report.grid, 1000)
        self.assertEqual(len(report.x), 1000)
        self.assertEqual(len(report.series), 1000)

    def test_gap_series(self):
        report = necessary_condition_gap(partial(euler_cauchy_omega, 1.0), 1.0, grid_n=99)
        self.assertEqual(report.x[0], 0.01)
        self.assertEqual(max(report.series), report.gap)
        self.assertEqual(report.x[report.series.index(report.gap)], report.argmax_x)
        self.assertAlmostEqual(report.argmax_x, 0.668, delta=0.01)


class TestSaturation(unittest.TestCase):

    @staticmethod
    def ratio(alpha, k, n):
        x = k / (n + 1.0)
        omega = float(euler_cauchy_omega(alpha, x))
        exact = (k * math.pi) ** 2 + alpha / 4
        err = abs((n + 1) ** 2 * omega / exact - 1.0)
        return abs(err / float(saturation_constant(alpha, k)) - 1.0)

    def test_reference_values(self):
        self.assertAlmostEqual(self.ratio(1.0, 1, 1000) / 4.1363e-5, 1.0, delta=0.02)
        self.assertAlmostEqual(self.ratio(0.1, 5, 1000) / 0.2076, 1.0, delta=0.02)

    def test_first_index_saturates(self):
        for alpha in (0.1, 1.0, 2.0, 5.0):
            with self.subTest(alpha=alpha):
                self.assertLess(self.ratio(alpha, 1, 1000), 0.05)
        decay = self.ratio(1.0, 1, 100) / self.ratio(1.0, 1, 1000)
        self.assertTrue(50 <= decay <= 200)


class TestEulerCauchyReports(unittest.TestCase):

    def test_attraction_gap(self):
        report = attraction_report(1.2, 100)
        self.assertAlmostEqual(report.attraction_gap / 0.0615, 1.0, delta=0.03)

    def test_three_point_uniform_error_location(self):
        for alpha, kbar in ((0.5, 0.788), (1.0, 0.668), (1.2, 0.631), (3.0, 1.0)):
            with self.subTest(alpha=alpha):
                row = necessary_condition_check(Method.FD, GridName.UNIFORM, 1, alpha, 1000, exact=True)
                self.assertLessEqual(row.ratio_minus_one, 0.011)
                self.assertAlmostEqual(row.kbar_over_n, kbar, delta=0.01)

    def test_three_point_uniform_large_n(self):
        expected = {0.5: (2.0853e-4, 0.7878), 1.0: (3.1754e-4, 0.6676), 1.2: (3.6226e-4, 0.6302)}
        for alpha, (ratio, kbar) in expected.items():
            with self.subTest(alpha=alpha):
                row = necessary_condition_check(Method.FD, GridName.UNIFORM, 1, alpha, 5000, exact=True)
                self.assertLessEqual(row.ratio_minus_one, 2 * ratio)
                self.assertAlmostEqual(row.kbar_over_n, kbar, delta=0.002)

    def test_exact_requires_three_point_uniform(self):
        with self.assertRaises(ConfigError):
            necessary_condition_check(Method.FD, GridName.EXP, 1, 1.0, 100, exact=True)


class TestGridComparison(unittest.TestCase):

    def test_fd_exponential_grid(self):
        for eta, expected in ((1, 0.5939), (10, 0.2210), (15, 0.1814)):
            with self.subTest(eta=eta):
                row = necessary_condition_check(Method.FD, GridName.EXP, eta, 1.0, 1000)
                self.assertAlmostEqual(row.max_err / expected, 1.0, delta=0.02)

    def test_fd_uniform_grid(self):
        row = necessary_condition_check(Method.FD, GridName.UNIFORM, 1, 1.0, 1000)
        self.assertAlmostEqual(row.max_err / 0.3201, 1.0, delta=0.02)

    def test_iga_exponential_grid(self):
        for eta, expected in ((1, 0.4433), (5, 0.0483), (10, 0.0265)):
            with self.subTest(eta=eta):
                row = necessary_condition_check(Method.IGA, GridName.EXP, eta, 1.0, 100)
                self.assertAlmostEqual(row.max_err / expected, 1.0, delta=0.05)

    def test_iga_outlier_count_is_stable(self):
        for eta in (4, 10):
            with self.subTest(eta=eta):
                counts = [necessary_condition_check(Method.IGA, GridName.EXP, eta, 1.0, n).outliers
                          for n in (50, 100)]
                self.assertEqual(counts[0], counts[1])


class TestL1Case(unittest.TestCase):

    def test_reference_statistics(self):
        stats = l1_case_stats(1000)
        self.assertEqual(stats.theta_refine, 3)
        self.assertAlmostEqual(stats.sup_abs_err / 37.0283, 1.0, delta=0.01)
        self.assertAlmostEqual(stats.max_analytic_rel_err / 0.4136, 1.0, delta=0.01)
        self.assertAlmostEqual(stats.tail_ratio, 4.0, delta=0.01)
        self.assertAlmostEqual(stats.eig_ratio, 2.8296, delta=0.001)
        self.assertAlmostEqual(stats.mean_eig, 3.92, delta=0.01)
        self.assertLess(stats.eig_ratio, stats.gershgorin_bound / math.sqrt(1001.0))

    def test_largest_error_sits_at_the_top_index(self):
        stats = l1_case_stats(100)
        self.assertAlmostEqual(stats.max_analytic_rel_err, stats.tail_ratio / stats.eig_ratio - 1.0, places=12)
        self.assertAlmostEqual(stats.max_analytic_rel_err / 0.4133, 1.0, delta=0.01)

    def test_square_grid_overshoots_at_the_first_index(self):
        coarse = l1_case_stats(1000, theta_refine=1)
        self.assertGreater(coarse.max_analytic_rel_err, 1.0)

    def test_error_grows_with_n(self):
        errors = [l1_case_stats(n).sup_abs_err for n in (100, 500, 1000)]
        self.assertTrue(errors[0] < errors[1] < errors[2])

    def test_minimum_size(self):
        with self.assertRaises(ConfigError):
            l1_case_stats(5)
        with self.assertRaises(ConfigError):
            l1_case_stats(100, theta_refine=0)


class TestLaplace2D(unittest.TestCase):

    def test_bound(self):
        self.assertEqual(LAPLACE_2D_BOUND, 1.0 - 4.0 / math.pi ** 2)
        self.assertEqual(laplace2d_gap(4).bound, LAPLACE_2D_BOUND)

    def test_large_grid_below_bound(self):
        stats = laplace2d_gap(64)
        self.assertTrue(0.55 <= stats.max_rel_err <= 0.5947)

    def test_brute_force(self):
        n = 8
        discrete = sorted((n + 1) ** 2 * (4 - 2 * math.cos(i * math.pi / (n + 1)) - 2 * math.cos(j * math.pi / (n + 1)))
                          for i, j in itertools.product(range(1, n + 1), repeat=2))
        continuous = sorted(math.pi ** 2 * (i * i + j * j) for i, j in itertools.product(range(1, n + 1), repeat=2))
        expected = max(abs(d / c - 1.0) for d, c in zip(discrete, continuous))
        self.assertAlmostEqual(laplace2d_gap(n).max_rel_err, expected, places=12)

    def test_size_limits(self):
        with self.assertRaises(ConfigError):
            laplace2d_gap(0)


class TestWeylLaw(unittest.TestCase):

    def test_counting_function_inverts_rearrangement(self):
        xs = (0.25, 0.5, 0.75)
        np.testing.assert_allclose(weyl_consistency(1000, xs=xs), xs, atol=0.02)


if __name__ == "__main__":
    unittest.main()
