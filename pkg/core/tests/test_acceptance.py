"""
Replication and runtime checks. Slow: select with ``--tag acceptance`` or
skip with ``--exclude-tag acceptance``.
"""

import time
import unittest

import numpy as np
from django.conf import settings
from django.test import SimpleTestCase, tag

from core.bootstrap import MbbConfig, default_block_length, perturb_series
from core.evaluate import (
    POOLED, ComponentTruth, EvaluationReport, best_candidate, score_decomposition, swindow_candidates,
    swindow_grid_search,
)
from core.mstl import MstlParams, MultiSeasonalSeries, mstl_decompose
from core.series_io import read_series_csv
from core.simulate import (
    DETERMINISTIC, HOURLY, STOCHASTIC, SWINDOW_STUDY_SETS, SimulationConfig, series_seed, simulate_series,
)
from core.stl import PERIODIC

# reference pooled RMSEs: trend, short seasonal, long seasonal, remainder
DETERMINISTIC_DAILY_RMSE = (0.0623, 0.0166, 0.1471, 0.1429)
STOCHASTIC_HOURLY_RMSE = (0.1933, 0.0952, 0.1803, 0.2128)
ELECTRICITY_BOOTSTRAP_RMSE = (207.6, 149.2, 180.5, 312.7)


def warm_up():
    """Compile the jitted kernels outside any timed region"""
    t = np.arange(1, 101, dtype=np.float64)
    mstl_decompose(MultiSeasonalSeries(np.sin(t / 3.0) + 0.01 * t, [7, 12]))
    mstl_decompose(MultiSeasonalSeries(np.sin(t / 3.0), []))


def simulated_corpus(count, base_seed=0, **config):
    return [simulate_series(SimulationConfig(seed=series_seed(base_seed, i), **config)) for i in range(count)]


def pooled_scores(truths, params):
    report = EvaluationReport()
    for index, truth in enumerate(truths):
        series = MultiSeasonalSeries(truth.composite, list(truth.periods))
        report.scores.append(score_decomposition(truth, mstl_decompose(series, params), series_id=str(index)))
    return report.aggregate(POOLED)


@tag('acceptance')
class ReconstructionIdentityTests(SimpleTestCase):
    def test_randomized_inputs_reconstruct(self):
        warm_up()
        rng = np.random.default_rng(2024)
        started = time.perf_counter()
        for case in range(1000):
            n = int(rng.integers(30, 5001))
            candidates = np.arange(2, (n - 1) // 2)
            count = int(rng.integers(0, 4))
            periods = [int(p) for p in rng.choice(candidates, size=count, replace=False)]
            lam = [None, 0.0, 0.5, 1.0][case % 4]
            values = np.exp(np.cumsum(rng.normal(scale=0.01, size=n))) + rng.uniform(0.1, 0.2, size=n)
            d = mstl_decompose(MultiSeasonalSeries(values, periods), MstlParams(boxcox_lambda=lam))
            self.assertLess(d.reconstruction_error(), 1e-9, msg=f"case {case}: n={n} periods={periods} lambda={lam}")
        self.assertLess(time.perf_counter() - started, 60.0)


@tag('acceptance')
class ReplicationTests(SimpleTestCase):
    def assertWithinFactor(self, observed, reference, factor=2.0):
        names = list(observed)
        for name, value, target in zip(names, observed.values(), reference):
            self.assertLess(value, target * factor, msg=f"{name}: {value:.4f} vs reference {target}")
            self.assertGreater(value, target / factor, msg=f"{name}: {value:.4f} vs reference {target}")

    def test_deterministic_daily(self):
        warm_up()
        started = time.perf_counter()
        truths = simulated_corpus(20, base_seed=1, dgp=DETERMINISTIC, gamma=0.2)
        pooled = pooled_scores(truths, MstlParams(s_windows=[PERIODIC, PERIODIC]))
        self.assertEqual(list(pooled), ['trend', 'seasonal_7', 'seasonal_365', 'remainder'])
        self.assertWithinFactor(pooled, DETERMINISTIC_DAILY_RMSE)
        self.assertLess(time.perf_counter() - started, 120.0)

    def test_stochastic_hourly(self):
        warm_up()
        started = time.perf_counter()
        truths = simulated_corpus(20, base_seed=2, dgp=STOCHASTIC, gamma=0.2, sigma2=0.025, frequency=HOURLY)
        pooled = pooled_scores(truths, MstlParams())
        self.assertEqual(list(pooled), ['trend', 'seasonal_24', 'seasonal_168', 'remainder'])
        self.assertWithinFactor(pooled, STOCHASTIC_HOURLY_RMSE)
        self.assertLess(time.perf_counter() - started, 60.0)

    def test_iterate_does_not_worsen_remainder(self):
        truths = simulated_corpus(10, base_seed=3, dgp=DETERMINISTIC, gamma=0.2)
        once = pooled_scores(truths, MstlParams(iterate=1))
        twice = pooled_scores(truths, MstlParams(iterate=2))
        self.assertLessEqual(twice['remainder'], once['remainder'] + 1e-6)


@tag('acceptance')
class BootstrapProtocolTests(SimpleTestCase):
    def bootstrap_scores(self, values, replicates=100):
        series = MultiSeasonalSeries(values, [24, 168])
        params = MstlParams()
        original = mstl_decompose(series, params)
        cfg = MbbConfig(block_length=default_block_length([24, 168], len(series)), replicates=replicates, seed=0)
        replicas = perturb_series(original.data, original, cfg)
        truth = ComponentTruth.from_decomposition(original)

        started = time.perf_counter()
        decompositions = [mstl_decompose(MultiSeasonalSeries(r, [24, 168]), params) for r in replicas]
        elapsed = time.perf_counter() - started

        structure = original.trend + original.seasonal_sum
        report = EvaluationReport()
        for index, (replica, d) in enumerate(zip(replicas, decompositions)):
            replica_truth = ComponentTruth(truth.trend, truth.seasonals, replica - structure)
            report.scores.append(score_decomposition(replica_truth, d, series_id=str(index)))
        return report.aggregate(POOLED), elapsed

    def test_runtime_on_hourly_stand_in(self):
        warm_up()
        truth = simulate_series(SimulationConfig(dgp=STOCHASTIC, sigma2=0.025, frequency=HOURLY, length=3601))
        _, elapsed = self.bootstrap_scores(truth.composite)
        self.assertLessEqual(elapsed, 7.0)

    def test_electricity_replication(self):
        path = settings.MSTLKIT.get('ELECTRICITY_CSV')
        if not path:
            raise unittest.SkipTest('MSTLKIT_ELECTRICITY_CSV is not set')
        series_file = read_series_csv(path)
        warm_up()
        pooled, _ = self.bootstrap_scores(series_file.values)
        self.assertGreater(pooled['remainder'], pooled['trend'])
        for value, target in zip(pooled.values(), ELECTRICITY_BOOTSTRAP_RMSE):
            self.assertLess(abs(value - target), 0.5 * target)


@tag('acceptance')
class SWindowPolicyTests(SimpleTestCase):
    def test_best_pair_has_shorter_first_window(self):
        dgp, alpha, beta, gamma, sigma2 = SWINDOW_STUDY_SETS[0]
        truths = simulated_corpus(20, base_seed=4, dgp=dgp, alpha=alpha, beta=beta, gamma=gamma,
                                  sigma2=sigma2, frequency=HOURLY)
        frame = swindow_grid_search(truths, swindow_candidates([7, 15, 23, 9999]))
        best = best_candidate(frame)
        self.assertLessEqual(best['s1'], best['s2'])
