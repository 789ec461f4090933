import numpy as np
from django.test import SimpleTestCase
from scipy import stats

from core.mstl import MultiSeasonalSeries
from core.preprocess import boxcox, interpolate_missing, inv_boxcox, validate_lambda


class BoxCoxTests(SimpleTestCase):
    def test_known_values(self):
        x = np.array([1.0, 4.0, 9.0])
        np.testing.assert_allclose(boxcox(x, 0.0), np.log(x))
        np.testing.assert_allclose(boxcox(x, 1.0), x - 1.0)
        np.testing.assert_allclose(boxcox(x, 0.5), [0.0, 2.0, 4.0])

    def test_inverse(self):
        x = np.array([0.5, 2.0, 30.0])
        for lam in (0.0, 0.3, 1.0):
            np.testing.assert_allclose(inv_boxcox(boxcox(x, lam), lam), x, rtol=1e-12)

    def test_round_trip_over_lambda_grid(self):
        x = np.array([0.05, 0.5, 1.0, 1.5, 9.2, 250.0])
        for lam in np.round(np.arange(0.0, 1.01, 0.1), 1):
            np.testing.assert_allclose(inv_boxcox(boxcox(x, lam), lam), x, rtol=1e-12, err_msg=f"lambda={lam}")

    def test_strictly_increasing(self):
        x = np.linspace(0.01, 50.0, 400)
        for lam in np.round(np.arange(0.0, 1.01, 0.1), 1):
            self.assertTrue(np.all(np.diff(boxcox(x, lam)) > 0), msg=f"lambda={lam}")

    def test_agrees_with_scipy_stats(self):
        x = np.array([0.3, 1.0, 7.5, 120.0])
        for lam in (0.0, 0.25, 1.0):
            np.testing.assert_allclose(boxcox(x, lam), stats.boxcox(x, lmbda=lam), rtol=1e-12)

    def test_fixed_points(self):
        for lam in (0.0, 0.3, 1.0):
            self.assertAlmostEqual(float(inv_boxcox(np.array([0.0]), lam)[0]), 1.0, places=14)
        np.testing.assert_allclose(inv_boxcox(np.array([2.0]), 0.5), [4.0])

    def test_log_of_non_positive_names_index(self):
        with self.assertRaisesRegex(ValueError, 'index 2'):
            boxcox(np.array([1.0, 2.0, 0.0, 3.0]), 0.0)

    def test_power_of_negative_is_rejected(self):
        with self.assertRaisesRegex(ValueError, 'index 1'):
            boxcox(np.array([1.0, -4.0]), 0.5)

    def test_lambda_range(self):
        self.assertEqual(validate_lambda(1), 1.0)
        for lam in (-0.1, 1.5, float('nan')):
            with self.assertRaises(ValueError):
                validate_lambda(lam)

    def test_inverse_outside_domain(self):
        with self.assertRaises(ValueError):
            inv_boxcox(np.array([-3.0]), 0.5)


class InterpolateMissingTests(SimpleTestCase):
    def test_linear_without_periods(self):
        series = MultiSeasonalSeries([1.0, np.nan, 3.0, np.nan, np.nan, 6.0])
        np.testing.assert_allclose(interpolate_missing(series), [1, 2, 3, 4, 5, 6])

    def test_edges_carry_nearest_observation(self):
        series = MultiSeasonalSeries([np.nan, 2.0, 3.0, 4.0, np.nan])
        np.testing.assert_allclose(interpolate_missing(series), [2, 2, 3, 4, 4])

    def test_complete_series_is_copied(self):
        values = np.array([1.0, 2.0, 3.0])
        filled = interpolate_missing(MultiSeasonalSeries(values))
        np.testing.assert_array_equal(filled, values)
        self.assertIsNot(filled, values)

    def test_seasonal_gaps_follow_the_cycle(self):
        t = np.arange(1, 121, dtype=np.float64)
        truth = 3.0 + 0.1 * t + np.sin(2 * np.pi * t / 12)
        values = truth.copy()
        gaps = [5, 6, 7, 40, 77, 78]
        values[gaps] = np.nan
        filled = interpolate_missing(MultiSeasonalSeries(values, [12]))
        np.testing.assert_allclose(filled, truth, atol=1e-8)
        observed = np.isfinite(values)
        np.testing.assert_array_equal(filled[observed], values[observed])

    def test_sawtooth_gaps_are_recovered(self):
        t = np.arange(120)
        truth = (t % 4).astype(np.float64)
        values = truth.copy()
        gaps = np.sort(np.random.default_rng(4).choice(np.arange(1, 119), size=12, replace=False))
        values[gaps] = np.nan
        filled = interpolate_missing(MultiSeasonalSeries(values, [4]))
        np.testing.assert_allclose(filled[gaps], truth[gaps], atol=1e-6)
        self.assertTrue(np.all(np.isfinite(filled)))

    def test_too_few_observations(self):
        with self.assertRaises(ValueError):
            interpolate_missing(MultiSeasonalSeries([np.nan, 1.0, np.nan]))

    def test_edge_gap_too_long(self):
        with self.assertRaisesRegex(ValueError, 'edge gap'):
            interpolate_missing(MultiSeasonalSeries([np.nan, np.nan, np.nan, 4.0, 5.0]))
