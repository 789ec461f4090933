"""
Multiple seasonal decomposition: STL applied in turn to each seasonal period,
shortest first, refined over ``iterate`` passes.
"""

import logging
import time
from dataclasses import dataclass, field, fields
from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from .preprocess import boxcox, interpolate_missing, validate_lambda
from .stl import PERIODIC, StlParams, stl_decompose
from .supsmu import SupsmuConfig, supsmu_smooth

logger = logging.getLogger(__name__)

DEFAULT_ITERATE = 2

# cycles of the longest period below which the seasonals may absorb trend curvature
PASSTHROUGH_MIN_CYCLES = 20

# StlParams fields an MstlParams may override for every inner fit
_OVERRIDABLE = {f.name for f in fields(StlParams)} - {'period', 'seasonal_window'}


@dataclass
class MultiSeasonalSeries:
    """Observations (NaN marks a missing value) with their candidate seasonal periods"""

    values: np.ndarray
    periods: List[int] = field(default_factory=list)
    origin: str = ''
    step: float = 1.0

    def __post_init__(self):
        values = np.asarray(self.values)
        if values.dtype == object:
            values = np.where(pd.isna(values), np.nan, values)
        self.values = values.astype(np.float64)
        if self.values.ndim != 1:
            raise ValueError("series values must be one-dimensional")
        if self.values.shape[0] < 3:
            raise ValueError(f"series needs at least 3 observations, got {self.values.shape[0]}")
        if np.any(np.isinf(self.values)):
            bad = int(np.flatnonzero(np.isinf(self.values))[0])
            raise ValueError(f"infinite value at index {bad}")
        periods = []
        for p in self.periods:
            if isinstance(p, float) and not p.is_integer():
                raise ValueError(f"non-integer period {p} is not supported")
            if int(p) != p or p < 1:
                raise ValueError(f"periods must be positive integers, got {p}")
            periods.append(int(p))
        self.periods = periods
        if self.step <= 0:
            raise ValueError(f"step must be positive, got {self.step}")

    def __len__(self):
        return self.values.shape[0]


@dataclass(frozen=True)
class SWindowPolicy:
    """Default seasonal window for the i-th period: smallest odd of C + K*i and C + K*i + 1"""

    c: int = 7
    k: int = 4

    def __post_init__(self):
        if int(self.c) != self.c or self.c < 1:
            raise ValueError(f"C must be a positive integer, got {self.c}")
        if int(self.k) != self.k or self.k < 0:
            raise ValueError(f"K must be a non-negative integer, got {self.k}")

    def window(self, i: int) -> int:
        base = self.c + self.k * i
        w = base if base % 2 == 1 else base + 1
        if w < 7:
            raise ValueError(f"seasonal window {w} for cycle {i} is below 7 (C={self.c}, K={self.k})")
        return w


@dataclass
class MstlParams:
    iterate: int = DEFAULT_ITERATE
    boxcox_lambda: Optional[float] = None
    s_windows: Optional[Sequence] = None
    stl_overrides: Dict[str, object] = field(default_factory=dict)
    robust: bool = False
    policy: SWindowPolicy = field(default_factory=SWindowPolicy)
    supsmu: SupsmuConfig = field(default_factory=SupsmuConfig)

    def __post_init__(self):
        if int(self.iterate) != self.iterate or self.iterate < 1:
            raise ValueError(f"iterate must be a positive integer, got {self.iterate}")
        if self.boxcox_lambda is not None:
            self.boxcox_lambda = validate_lambda(self.boxcox_lambda)
        unknown = set(self.stl_overrides) - _OVERRIDABLE
        if unknown:
            raise ValueError(f"unknown STL overrides: {', '.join(sorted(unknown))}")
        if self.s_windows is not None:
            self.s_windows = [_check_s_window(w) for w in self.s_windows]

    def to_dict(self) -> Dict:
        return {
            'iterate': self.iterate,
            'lambda': self.boxcox_lambda,
            's_windows': self.s_windows,
            'stl_overrides': dict(self.stl_overrides),
            'robust': self.robust,
            'policy': {'C': self.policy.c, 'K': self.policy.k},
        }


@dataclass
class Decomposition:
    """Trend, one seasonal per retained period (ascending) and remainder of ``data``"""

    data: np.ndarray
    trend: np.ndarray
    seasonals: Dict[int, np.ndarray]
    remainder: np.ndarray
    lambda_applied: Optional[float] = None
    retained_periods: List[int] = field(default_factory=list)
    s_windows: List = field(default_factory=list)
    iterate: int = 1

    def __len__(self):
        return self.data.shape[0]

    @property
    def seasonal_sum(self) -> np.ndarray:
        total = np.zeros_like(self.data)
        for seasonal in self.seasonals.values():
            total = total + seasonal
        return total

    def reconstruction_error(self) -> float:
        rebuilt = self.trend + self.seasonal_sum + self.remainder
        return float(np.max(np.abs(rebuilt - self.data))) if len(self) else 0.0


def _check_s_window(w):
    if w == PERIODIC:
        return PERIODIC
    if isinstance(w, bool) or int(w) != w or w < 1 or int(w) % 2 == 0:
        raise ValueError(f"seasonal windows must be positive odd integers or '{PERIODIC}', got {w}")
    return int(w)


def retain_periods(periods: Sequence[int], series_length: int) -> List[int]:
    """Periods p with 1 < p < series_length / 2, deduplicated, ascending"""
    if series_length < 3:
        raise ValueError(f"series length must be at least 3, got {series_length}")
    periods = [int(p) for p in periods]
    kept = sorted({p for p in periods if 1 < p < series_length / 2})
    if len(kept) != len(periods):
        logger.warning(
            f"Retained periods {kept} of {periods} for series length {series_length} "
            f"(duplicates, period 1 and periods not below half the length are dropped)"
        )
    return kept


def default_s_windows(num_periods: int, policy: SWindowPolicy = SWindowPolicy()) -> List[int]:
    if num_periods < 1:
        raise ValueError(f"num_periods must be at least 1, got {num_periods}")
    return [policy.window(i) for i in range(1, num_periods + 1)]


def resolve_s_windows(s_windows, num_periods: int, policy: SWindowPolicy = SWindowPolicy()) -> List:
    """Given windows first, the tail filled from the policy defaults"""
    defaults = default_s_windows(num_periods, policy)
    given = list(s_windows or [])[:num_periods]
    return given + defaults[len(given):]


def mstl_decompose(series: MultiSeasonalSeries, params: MstlParams = None) -> Decomposition:
    """
    Decompose ``series`` into trend, one seasonal component per retained
    period, and remainder.

    Missing values are interpolated and the Box-Cox transform applied first;
    the components add up to that transformed series (``Decomposition.data``).
    Without retained periods the trend comes from the super smoother.

    A pure trend yields seasonals under 2% of the trend range once the series
    spans ``PASSTHROUGH_MIN_CYCLES`` cycles of its longest period; shorter
    series (three weekly cycles of hourly data, say) let the seasonal
    smoothers pick up some trend curvature.
    """
    params = params or MstlParams()
    n = len(series)
    started = time.perf_counter()

    retained = retain_periods(series.periods, n)
    iterate = 1 if len(retained) == 1 else params.iterate
    if retained and n < 2 * retained[-1] + 1:
        raise ValueError(f"series of length {n} is too short for period {retained[-1]}")
    if retained and n < PASSTHROUGH_MIN_CYCLES * retained[-1]:
        logger.debug(
            f"Period {retained[-1]} completes only {n / retained[-1]:.1f} cycles in {n} points; "
            f"its seasonal may absorb part of the trend"
        )

    values = interpolate_missing(series)
    if params.boxcox_lambda is not None:
        values = boxcox(values, params.boxcox_lambda)
    data = values.copy()

    seasonals: Dict[int, np.ndarray] = {}
    windows: List = []
    deseas = data.copy()
    if retained:
        windows = resolve_s_windows(params.s_windows, len(retained), params.policy)
        seasonals = {p: np.zeros(n) for p in retained}
        trend = np.zeros(n)
        for _ in range(iterate):
            for period, window in zip(retained, windows):
                deseas = deseas + seasonals[period]
                fit = stl_decompose(
                    deseas,
                    StlParams.build(period, window, robust=params.robust, **params.stl_overrides),
                )
                seasonals[period] = fit.seasonal
                deseas = deseas - seasonals[period]
                trend = fit.trend
    else:
        trend = supsmu_smooth(data, params.supsmu)

    remainder = deseas - trend
    logger.debug(
        f"Decomposed series '{series.origin}' (n={n}, periods={retained}, iterate={iterate}) "
        f"in {time.perf_counter() - started:.4f}s"
    )
    return Decomposition(
        data=data,
        trend=trend,
        seasonals=seasonals,
        remainder=remainder,
        lambda_applied=params.boxcox_lambda,
        retained_periods=retained,
        s_windows=windows,
        iterate=iterate,
    )


def seasonal_adjust(d: Decomposition) -> np.ndarray:
    """The decomposed series with every seasonal component removed"""
    return d.data - d.seasonal_sum
