import numpy as np
from django.test import SimpleTestCase

from core.simulate import (
    DETERMINISTIC, HOURLY, PARAMETER_SETS, STOCHASTIC, SWINDOW_STUDY_SETS, SimulationConfig,
    gen_deterministic_seasonal, gen_deterministic_trend, gen_stochastic_seasonal, gen_stochastic_trend,
    fourier_seasonal, integrated_trend, normalise, seasonal_coefficient_path, series_seed, simulate_series,
    stochastic_coefficient_path, substream,
)


class SimulationConfigTests(SimpleTestCase):
    def test_defaults(self):
        daily = SimulationConfig(dgp=DETERMINISTIC)
        self.assertEqual(daily.length, 1096)
        self.assertEqual(daily.periods, (7, 365))
        hourly = SimulationConfig(dgp=STOCHASTIC, frequency=HOURLY, sigma2=0.025)
        self.assertEqual(hourly.length, 505)
        self.assertEqual(hourly.periods, (24, 168))
        self.assertEqual(hourly.weights, (1.0, 1.0, 0.2))

    def test_validation(self):
        with self.assertRaises(ValueError):
            SimulationConfig(dgp=DETERMINISTIC, sigma2=0.1)
        with self.assertRaises(ValueError):
            SimulationConfig(dgp='seasonal')
        with self.assertRaises(ValueError):
            SimulationConfig(dgp=STOCHASTIC, sigma2=-1.0)
        with self.assertRaises(ValueError):
            SimulationConfig(dgp=STOCHASTIC, seed=-1)
        with self.assertRaises(ValueError):
            SimulationConfig(dgp=STOCHASTIC, frequency='weekly')

    def test_parameter_sets(self):
        self.assertEqual(len(PARAMETER_SETS), 6)
        self.assertEqual([row[3] for row in SWINDOW_STUDY_SETS], [0.2, 0.4, 0.6])
        self.assertTrue(all(row[0] == STOCHASTIC for row in SWINDOW_STUDY_SETS))


class SimulateSeriesTests(SimpleTestCase):
    def test_components_are_normalised(self):
        truth = simulate_series(SimulationConfig(dgp=DETERMINISTIC, seed=4))
        for component in (truth.trend, truth.seasonal_short, truth.seasonal_long):
            self.assertAlmostEqual(component.mean(), 0.0, delta=1e-12)
            self.assertAlmostEqual(component.std(), 1.0, delta=1e-12)

    def test_composite_is_weighted_sum(self):
        cfg = SimulationConfig(dgp=STOCHASTIC, alpha=0.5, beta=2.0, gamma=0.4, sigma2=0.05, seed=8)
        truth = simulate_series(cfg)
        expected = truth.trend + 0.5 * truth.seasonal_short + 2.0 * truth.seasonal_long + 0.4 * truth.remainder
        np.testing.assert_array_equal(truth.composite, expected)

    def test_deterministic_seasonals_repeat_exactly(self):
        truth = simulate_series(SimulationConfig(dgp=DETERMINISTIC, seed=1))
        np.testing.assert_array_equal(truth.seasonal_short[:-7], truth.seasonal_short[7:])
        np.testing.assert_array_equal(truth.seasonal_long[:-365], truth.seasonal_long[365:])

    def test_stochastic_seasonals_drift(self):
        truth = simulate_series(SimulationConfig(dgp=STOCHASTIC, sigma2=0.05, frequency=HOURLY, seed=1))
        self.assertFalse(np.allclose(truth.seasonal_short[:24], truth.seasonal_short[-24:]))

    def test_seed_determinism(self):
        cfg = SimulationConfig(dgp=STOCHASTIC, sigma2=0.025, seed=123)
        first, second = simulate_series(cfg), simulate_series(cfg)
        np.testing.assert_array_equal(first.composite, second.composite)
        other = simulate_series(SimulationConfig(dgp=STOCHASTIC, sigma2=0.025, seed=124))
        self.assertFalse(np.array_equal(first.composite, other.composite))

    def test_component_streams_are_independent(self):
        low = simulate_series(SimulationConfig(dgp=STOCHASTIC, gamma=0.2, sigma2=0.025, seed=9))
        high = simulate_series(SimulationConfig(dgp=STOCHASTIC, gamma=0.6, sigma2=0.075, seed=9))
        np.testing.assert_array_equal(low.trend, high.trend)
        np.testing.assert_array_equal(low.remainder, high.remainder)


class GeneratorTests(SimpleTestCase):
    def test_zero_variance_stochastic_matches_deterministic(self):
        deterministic = gen_deterministic_seasonal(505, 24, substream(5, 1))
        stochastic = gen_stochastic_seasonal(505, 24, 0.0, substream(5, 1))
        np.testing.assert_array_equal(stochastic, deterministic)

    def test_integrated_trend(self):
        eps = np.random.default_rng(0).normal(size=50)
        trend = integrated_trend(eps)
        np.testing.assert_allclose(np.diff(trend, 2), eps[2:], atol=1e-12)
        self.assertEqual(trend[0], eps[0])

    def test_coefficient_paths(self):
        initial = np.array([1.0, 2.0])
        increments = np.array([[1.0, 0.0], [1.0, 1.0]])
        np.testing.assert_array_equal(
            seasonal_coefficient_path(initial, increments, walk=True), [[1, 2], [2, 2], [3, 3]]
        )
        np.testing.assert_array_equal(
            seasonal_coefficient_path(initial, increments, walk=False), [[1, 2], [2, 2], [2, 3]]
        )

    def test_series_seeds(self):
        self.assertEqual(series_seed(0, 3), series_seed(0, 3))
        self.assertEqual(len({series_seed(0, i) for i in range(50)}), 50)
        self.assertLess(series_seed(2 ** 63, 1), 2 ** 64)

    def test_normalise_rejects_constant(self):
        with self.assertRaises(ValueError):
            normalise(np.ones(5))


class TrendGeneratorTests(SimpleTestCase):
    def test_deterministic_trend_is_normalised_quadratic(self):
        trend = gen_deterministic_trend(200, substream(9, 0))
        self.assertAlmostEqual(trend.mean(), 0.0, places=12)
        self.assertAlmostEqual(trend.std(), 1.0, places=12)
        # constant second difference
        second = np.diff(trend, n=2)
        np.testing.assert_allclose(second, second[0], atol=1e-10)

    def test_stochastic_trend_is_normalised(self):
        trend = gen_stochastic_trend(505, substream(9, 0))
        self.assertEqual(trend.shape, (505,))
        self.assertAlmostEqual(trend.mean(), 0.0, places=12)
        self.assertAlmostEqual(trend.std(), 1.0, places=12)

    def test_short_lengths_rejected(self):
        with self.assertRaises(ValueError):
            gen_deterministic_trend(1, substream(0, 0))
        with self.assertRaises(ValueError):
            gen_stochastic_trend(2, substream(0, 0))


class CoefficientPathTests(SimpleTestCase):
    def test_walk_increments_are_martingale_differences(self):
        sigma2 = 0.05
        path = stochastic_coefficient_path(1001, sigma2, substream(21, 1))
        self.assertEqual(path.shape, (1001, 10))
        increments = np.diff(path, axis=0)
        self.assertLess(abs(increments.mean()), 3 * np.sqrt(sigma2) / np.sqrt(1000))
        self.assertLess(abs(increments.var() - sigma2), 0.1 * sigma2)

    def test_iid_jitter_shares_the_draws_of_the_walk(self):
        walk = stochastic_coefficient_path(50, 0.1, substream(3, 2), walk=True)
        iid = stochastic_coefficient_path(50, 0.1, substream(3, 2), walk=False)
        np.testing.assert_array_equal(walk[0], iid[0])
        np.testing.assert_allclose(np.cumsum(iid[1:] - iid[0], axis=0), walk[1:] - walk[0], atol=1e-12)

    def test_single_sine_coefficient(self):
        pattern = fourier_seasonal(8, 4, [1.0, 0.0, 0.0, 0.0, 0.0], np.zeros(5))
        np.testing.assert_allclose(pattern, [1, 0, -1, 0, 1, 0, -1, 0], atol=1e-12)

    def test_unit_impulse_integrates_to_a_ramp(self):
        np.testing.assert_array_equal(integrated_trend([1.0, 0.0, 0.0, 0.0]), [1, 2, 3, 4])
