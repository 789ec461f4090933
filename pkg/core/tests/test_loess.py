import numpy as np
from django.test import SimpleTestCase

from core.loess import (
    DegenerateNeighborhoodError, LoessConfig, WeightedSeries, loess_fit_point, loess_smooth, tricube_weight,
)


def dense_local_fit(x, y, rw, at, q, degree):
    """Weighted least squares over the q nearest points, solved with lstsq"""
    nearest = np.sort(np.argsort(np.abs(x - at), kind='stable')[:q])
    xs, ys, ws = x[nearest], y[nearest], rw[nearest]
    h = np.max(np.abs(xs - at))
    u = np.abs(xs - at) / h
    w = np.where(u < 1, (1 - u ** 3) ** 3, 0.0) * ws
    design = np.vander(xs - at, degree + 1, increasing=True)
    sw = np.sqrt(w)
    coef, *_ = np.linalg.lstsq(design * sw[:, None], ys * sw, rcond=None)
    return coef[0]


class TricubeTests(SimpleTestCase):
    def test_values(self):
        self.assertEqual(tricube_weight(0.0), 1.0)
        self.assertAlmostEqual(tricube_weight(0.5), 0.669921875, places=15)
        self.assertAlmostEqual(tricube_weight(-0.5), 0.669921875, places=15)
        self.assertEqual(tricube_weight(1.0), 0.0)
        self.assertEqual(tricube_weight(2.5), 0.0)

    def test_decreases_with_distance(self):
        weights = [tricube_weight(u) for u in np.linspace(0.0, 1.0, 101)]
        self.assertTrue(np.all(np.diff(weights) < 0))


class LoessConfigTests(SimpleTestCase):
    def test_rejects_even_window(self):
        with self.assertRaises(ValueError):
            LoessConfig(window_width=6)

    def test_rejects_bad_degree_and_jump(self):
        with self.assertRaises(ValueError):
            LoessConfig(window_width=7, degree=3)
        with self.assertRaises(ValueError):
            LoessConfig(window_width=7, jump=0)

    def test_weighted_series_checks(self):
        with self.assertRaises(ValueError):
            WeightedSeries(np.array([1.0, 3.0, 2.0]), np.zeros(3))
        with self.assertRaises(ValueError):
            WeightedSeries(np.arange(3.0), np.zeros(3), np.array([1.0, -1.0, 1.0]))
        with self.assertRaises(ValueError):
            WeightedSeries(np.arange(3.0), np.zeros(4))


class LoessFitPointTests(SimpleTestCase):
    def setUp(self):
        rng = np.random.default_rng(11)
        self.x = np.arange(1.0, 11.0)
        self.y = rng.normal(size=10)
        self.rw = rng.uniform(0.2, 1.0, size=10)

    def test_matches_dense_oracle(self):
        series = WeightedSeries(self.x, self.y, self.rw)
        for degree in (0, 1, 2):
            for at in (1.0, 4.3, 7.0, 10.0):
                expected = dense_local_fit(self.x, self.y, self.rw, at, 7, degree)
                got = loess_fit_point(series, at, LoessConfig(window_width=7, degree=degree))
                self.assertAlmostEqual(got, expected, delta=1e-9, msg=f"degree={degree} at={at}")

    def test_zeroing_an_outlier_moves_toward_its_removal(self):
        x = np.arange(1.0, 31.0)
        y = np.sin(x / 5.0)
        y[10] += 20.0
        cfg = LoessConfig(window_width=7)
        rw = np.ones(30)
        full = loess_fit_point(WeightedSeries(x, y, rw), x[10], cfg)
        rw[10] = 0.0
        zeroed = loess_fit_point(WeightedSeries(x, y, rw), x[10], cfg)
        removed = loess_fit_point(WeightedSeries(np.delete(x, 10), np.delete(y, 10)), x[10], cfg)
        self.assertLess(abs(zeroed - removed), abs(full - removed))

    def test_all_zero_weights_raise(self):
        series = WeightedSeries(self.x, self.y, np.zeros(10))
        with self.assertRaises(DegenerateNeighborhoodError):
            loess_fit_point(series, 5.0, LoessConfig(window_width=5))


class LoessSmoothTests(SimpleTestCase):
    def test_reproduces_linear_data(self):
        x = np.arange(1.0, 51.0)
        y = 2.0 * x + 1.0
        for jump in (1, 3, 7):
            fit = loess_smooth(WeightedSeries(x, y), LoessConfig(window_width=9, degree=1, jump=jump))
            np.testing.assert_allclose(fit, y, atol=1e-10)

    def test_reproduces_quadratic_data(self):
        x = np.arange(1.0, 41.0)
        y = 0.5 * x ** 2 - 3.0 * x + 2.0
        fit = loess_smooth(WeightedSeries(x, y), LoessConfig(window_width=11, degree=2))
        np.testing.assert_allclose(fit, y, atol=1e-8)

    def test_window_wider_than_series(self):
        x = np.arange(1.0, 8.0)
        y = -x + 4.0
        fit = loess_smooth(WeightedSeries(x, y), LoessConfig(window_width=21))
        np.testing.assert_allclose(fit, y, atol=1e-10)

    def test_zero_weights_fall_back_to_unweighted_fit(self):
        rng = np.random.default_rng(3)
        y = rng.normal(size=30)
        cfg = LoessConfig(window_width=7)
        plain = loess_smooth(WeightedSeries.from_values(y), cfg)
        zeroed = loess_smooth(WeightedSeries.from_values(y, np.zeros(30)), cfg)
        np.testing.assert_allclose(zeroed, plain, atol=1e-12)

    def test_change_stays_inside_the_windows_holding_it(self):
        y = np.random.default_rng(8).normal(size=60)
        cfg = LoessConfig(window_width=5)
        before = loess_smooth(WeightedSeries.from_values(y), cfg)
        bumped = y.copy()
        bumped[30] += 10.0
        after = loess_smooth(WeightedSeries.from_values(bumped), cfg)
        changed = set(np.flatnonzero(np.abs(after - before) > 1e-12).tolist())
        self.assertIn(30, changed)
        self.assertLessEqual(changed, set(range(28, 33)))

    def test_jump_interpolates_between_fits(self):
        rng = np.random.default_rng(5)
        y = rng.normal(size=25)
        fit = loess_smooth(WeightedSeries.from_values(y), LoessConfig(window_width=9, jump=4))
        full = loess_smooth(WeightedSeries.from_values(y), LoessConfig(window_width=9))
        for i in (0, 4, 8, 12, 16, 20, 24):
            self.assertAlmostEqual(fit[i], full[i], delta=1e-12)
        self.assertAlmostEqual(fit[2], (fit[0] + fit[4]) / 2.0, delta=1e-12)
