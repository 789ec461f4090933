"""
Per-component RMSE scoring and the corpus benchmark runner.
"""

import json
import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from .mstl import Decomposition, MstlParams, MultiSeasonalSeries, SWindowPolicy, mstl_decompose
from .series_io import (
    CorpusEntry, SeriesFileError, load_corpus_series, read_manifest, write_frame_csv,
)
from .simulate import GroundTruth

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1

POOLED = 'pooled'
MEAN = 'mean'


def rmse(truth, estimate) -> float:
    truth = np.asarray(truth, dtype=np.float64)
    estimate = np.asarray(estimate, dtype=np.float64)
    if truth.shape != estimate.shape:
        raise ValueError(f"length mismatch: truth {truth.shape}, estimate {estimate.shape}")
    if truth.size == 0:
        raise ValueError("rmse of empty arrays is undefined")
    diff = truth - estimate
    return float(np.sqrt(np.mean(diff * diff)))


@dataclass
class ComponentTruth:
    """Reference components already on the scale a decomposition should recover"""

    trend: np.ndarray
    seasonals: Dict[int, np.ndarray]
    remainder: np.ndarray

    @classmethod
    def from_ground_truth(cls, truth: GroundTruth, weights: Optional[Tuple[float, float, float]] = None
                          ) -> 'ComponentTruth':
        alpha, beta, gamma = weights if weights is not None else truth.weights
        short_period, long_period = truth.periods
        return cls(
            trend=truth.trend,
            seasonals={short_period: alpha * truth.seasonal_short, long_period: beta * truth.seasonal_long},
            remainder=gamma * truth.remainder,
        )

    @classmethod
    def from_decomposition(cls, decomposition: Decomposition) -> 'ComponentTruth':
        return cls(
            trend=decomposition.trend,
            seasonals=dict(decomposition.seasonals),
            remainder=decomposition.remainder,
        )


@dataclass
class ComponentScores:
    series_id: str
    trend_rmse: float
    seasonal_rmse: Dict[int, float]
    remainder_rmse: float
    n: int
    wall_clock_seconds: float = 0.0

    def components(self) -> Dict[str, float]:
        scores = {'trend': self.trend_rmse}
        for period, value in sorted(self.seasonal_rmse.items()):
            scores[f"seasonal_{period}"] = value
        scores['remainder'] = self.remainder_rmse
        return scores

    def non_finite(self) -> List[str]:
        return [name for name, value in self.components().items() if not math.isfinite(value)]

    def to_dict(self) -> Dict:
        return {
            'series_id': self.series_id,
            'n': self.n,
            'wall_clock_seconds': self.wall_clock_seconds,
            'rmse': self.components(),
        }


def score_decomposition(truth: Union[GroundTruth, ComponentTruth], result: Decomposition,
                        weights: Optional[Tuple[float, float, float]] = None, series_id: str = '',
                        wall_clock_seconds: float = 0.0) -> ComponentScores:
    """
    RMSE of each component of ``result`` against ``truth``.

    A simulated ``GroundTruth`` is compared at its weighted scale
    (alpha * S_short, beta * S_long, gamma * R), with ``weights`` overriding
    the ones in its config; a ``ComponentTruth`` is compared as given.
    """
    if isinstance(truth, GroundTruth):
        truth = ComponentTruth.from_ground_truth(truth, weights)

    missing = [p for p in truth.seasonals if p not in result.seasonals]
    if missing:
        raise ValueError(
            f"decomposition lacks seasonal components for periods {missing} "
            f"(has {sorted(result.seasonals)})"
        )
    return ComponentScores(
        series_id=series_id,
        trend_rmse=rmse(truth.trend, result.trend),
        seasonal_rmse={p: rmse(s, result.seasonals[p]) for p, s in sorted(truth.seasonals.items())},
        remainder_rmse=rmse(truth.remainder, result.remainder),
        n=len(result),
        wall_clock_seconds=wall_clock_seconds,
    )


@dataclass
class EvaluationReport:
    scores: List[ComponentScores] = field(default_factory=list)
    errors: List[Dict] = field(default_factory=list)
    config: Dict = field(default_factory=dict)
    total_seconds: float = 0.0

    def component_names(self) -> List[str]:
        names = {}
        for score in self.scores:
            for name in score.components():
                names[name] = True
        seasonal = sorted((n for n in names if n.startswith('seasonal_')), key=lambda n: int(n.split('_')[1]))
        return (['trend'] if self.scores else []) + seasonal + (['remainder'] if self.scores else [])

    def aggregate(self, mode: str = POOLED) -> Dict[str, Optional[float]]:
        """
        Per-component aggregate RMSE across series; pooled squares the
        per-series scores back into squared errors weighted by length.
        Undefined (None) when no series was scored.
        """
        if mode not in (POOLED, MEAN):
            raise ValueError(f"aggregate mode must be '{POOLED}' or '{MEAN}', got '{mode}'")
        if not self.scores:
            return {'trend': None, 'remainder': None}

        result = {}
        for name in self.component_names():
            pairs = [(s.components()[name], s.n) for s in self.scores if name in s.components()]
            if mode == POOLED:
                total = sum(n for _, n in pairs)
                result[name] = math.sqrt(sum(value * value * n for value, n in pairs) / total)
            else:
                result[name] = sum(value for value, _ in pairs) / len(pairs)
        return result

    @property
    def max_series_seconds(self) -> float:
        return max((s.wall_clock_seconds for s in self.scores), default=0.0)

    def to_dict(self) -> Dict:
        return {
            'schema_version': SCHEMA_VERSION,
            'config': self.config,
            'series_count': len(self.scores) + len(self.errors),
            'scored_count': len(self.scores),
            'failed_count': len(self.errors),
            'aggregate': {POOLED: self.aggregate(POOLED), MEAN: self.aggregate(MEAN)},
            'total_seconds': self.total_seconds,
            'series': [s.to_dict() for s in self.scores],
            'errors': list(self.errors),
        }

    def to_json(self) -> str:
        """
        Strict JSON; raises ValueError if a score is NaN or infinite.
        """
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, allow_nan=False)

    def to_frame(self) -> pd.DataFrame:
        """One row per scored series, failed series, then the two aggregate rows"""
        names = self.component_names()
        rows = []
        for score in self.scores:
            components = score.components()
            row = {'series_id': score.series_id, 'n': score.n, 'wall_clock_seconds': score.wall_clock_seconds}
            row.update({f"{name}_rmse": components.get(name) for name in names})
            row['error'] = ''
            rows.append(row)
        for error in self.errors:
            rows.append({'series_id': error['series_id'], 'error': error['message']})
        for mode in (POOLED, MEAN):
            aggregate = self.aggregate(mode)
            row = {'series_id': f"<{mode}>", 'wall_clock_seconds': self.total_seconds if mode == POOLED else None}
            row.update({f"{name}_rmse": aggregate.get(name) for name in names})
            rows.append(row)
        columns = ['series_id', 'n', 'wall_clock_seconds'] + [f"{name}_rmse" for name in names] + ['error']
        return pd.DataFrame(rows, columns=columns)

    def write_csv(self, path) -> Path:
        return write_frame_csv(self.to_frame(), path)


class BenchmarkRunner:
    """Decomposes and scores every series of a corpus manifest"""

    def __init__(self, params: MstlParams, threads: int = 1):
        if threads < 1:
            raise ValueError(f"threads must be positive, got {threads}")
        self.params = params
        self.threads = int(threads)

    def _run_entry(self, entry: CorpusEntry, base_dir: Path) -> Dict:
        started = time.perf_counter()
        try:
            loaded = load_corpus_series(entry, base_dir)
            series = MultiSeasonalSeries(loaded.values, entry.periods, origin=entry.series_id)
            decomposition = mstl_decompose(series, self.params)
            elapsed = time.perf_counter() - started
            truth = ComponentTruth(loaded.trend, loaded.seasonals, loaded.remainder)
            scores = score_decomposition(truth, decomposition, series_id=entry.series_id,
                                         wall_clock_seconds=elapsed)
        except (OSError, ValueError) as e:
            logger.error(f"Series '{entry.series_id}' failed: {e}")
            return {'success': False, 'message': str(e)}
        except Exception as e:
            logger.error(f"Series '{entry.series_id}' failed unexpectedly: {type(e).__name__}: {e}")
            return {'success': False, 'message': f"{type(e).__name__}: {e}"}

        bad = scores.non_finite()
        if bad:
            logger.error(f"Series '{entry.series_id}' has non-finite RMSE for {', '.join(bad)}")
            return {'success': False, 'message': f"non-finite RMSE for {', '.join(bad)}"}
        return {'success': True, 'message': 'scored', 'scores': scores}

    def run(self, location) -> EvaluationReport:
        """
        Score the corpus at ``location`` (a manifest file or corpus directory).

        Raises:
            OSError: the manifest itself cannot be read
        """
        started = time.perf_counter()
        path, items = read_manifest(location)
        base_dir = path.parent

        results: List[Optional[Dict]] = [None] * len(items)
        jobs = []
        for position, (line, item) in enumerate(items):
            if isinstance(item, SeriesFileError):
                logger.error(f"Skipping manifest entry: {item}")
                results[position] = {'success': False, 'message': str(item), 'series_id': f"line-{line}"}
            else:
                jobs.append((position, item))

        with ThreadPoolExecutor(max_workers=self.threads) as pool:
            futures = [(position, entry, pool.submit(self._run_entry, entry, base_dir))
                       for position, entry in jobs]
            for position, entry, future in futures:
                results[position] = dict(future.result(), series_id=entry.series_id)

        report = EvaluationReport(
            config={'manifest': str(path), 'threads': self.threads, 'params': self.params.to_dict()},
        )
        for result in results:
            if result['success']:
                report.scores.append(result['scores'])
            else:
                report.errors.append({'series_id': result['series_id'], 'message': result['message']})
        report.total_seconds = time.perf_counter() - started

        logger.info(
            f"Benchmark of {path}: {len(report.scores)} scored, {len(report.errors)} failed "
            f"in {report.total_seconds:.3f}s"
        )
        return report


def run_benchmark(manifest, params: MstlParams = None, threads: int = 1) -> EvaluationReport:
    return BenchmarkRunner(params or MstlParams(), threads=threads).run(manifest)


def swindow_candidates(windows: Sequence[int]) -> Dict[str, Tuple[int, int]]:
    """Every (short, long) seasonal window pair over ``windows``"""
    return {f"{s1}/{s2}": (int(s1), int(s2)) for s1 in windows for s2 in windows}


def policy_candidates(cs: Sequence[int], ks: Sequence[int]) -> Dict[str, Tuple[int, int]]:
    """Window pairs produced by the default-window formula for each C and K"""
    candidates = {}
    for c in cs:
        for k in ks:
            policy = SWindowPolicy(c=c, k=k)
            candidates[f"C={c},K={k}"] = (policy.window(1), policy.window(2))
    return candidates


def swindow_grid_search(truths: Sequence[GroundTruth], candidates: Dict[str, Tuple[int, int]],
                        params: MstlParams = None) -> pd.DataFrame:
    """
    Decompose every simulated series once per candidate window pair and score it.

    Returns one row per (series, candidate) with the component RMSEs; the
    candidate with the lowest median remainder RMSE is ``best_candidate``.
    """
    params = params or MstlParams()
    rows = []
    for index, truth in enumerate(truths):
        series = MultiSeasonalSeries(truth.composite, list(truth.periods), origin=f"series-{index}")
        for label, windows in candidates.items():
            run_params = replace(params, s_windows=list(windows))
            scores = score_decomposition(truth, mstl_decompose(series, run_params), series_id=series.origin)
            row = {'series': index, 'candidate': label, 's1': windows[0], 's2': windows[1]}
            row.update({f"{name}_rmse": value for name, value in scores.components().items()})
            rows.append(row)
    logger.info(f"Seasonal window grid: {len(truths)} series x {len(candidates)} candidates")
    return pd.DataFrame(rows)


def grid_medians(frame: pd.DataFrame) -> pd.DataFrame:
    """Median of each RMSE column per candidate, best remainder first"""
    rmse_columns = [c for c in frame.columns if c.endswith('_rmse')]
    medians = frame.groupby(['candidate', 's1', 's2'], sort=False)[rmse_columns].median().reset_index()
    return medians.sort_values('remainder_rmse', kind='stable').reset_index(drop=True)


def best_candidate(frame: pd.DataFrame) -> Dict:
    return grid_medians(frame).iloc[0].to_dict()
