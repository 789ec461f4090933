"""
Seasonal-Trend decomposition using Loess for a single seasonal period.

The inner loop (detrend, cycle-subseries smoothing, low-pass filter,
deseasonalize, trend smoothing) and the bisquare outer loop run inside one
jitted kernel; ``StlParams`` resolves the conventional default windows.
"""

import logging
import math
from dataclasses import dataclass, replace
from typing import Optional, Union

import numpy as np
from numba import njit

from .loess import JIT_OPTIONS, _fit_with_fallback, _smooth

logger = logging.getLogger(__name__)

PERIODIC = 'periodic'

SeasonalWindow = Union[int, str]


def next_odd(value: float) -> int:
    """Smallest odd integer >= value"""
    n = int(math.ceil(value))
    return n if n % 2 == 1 else n + 1


def _check_odd_window(name: str, value) -> None:
    if isinstance(value, bool) or int(value) != value or value < 1 or int(value) % 2 == 0:
        raise ValueError(f"{name} must be a positive odd integer, got {value}")


@dataclass(frozen=True)
class StlParams:
    """
    Controls for one STL fit.

    Windows and jumps left as None are derived from the period and the
    seasonal window when the series length is known (see ``resolved``).
    """

    period: int
    seasonal_window: SeasonalWindow = PERIODIC
    trend_window: Optional[int] = None
    lowpass_window: Optional[int] = None
    seasonal_degree: int = 0
    trend_degree: int = 1
    lowpass_degree: int = 1
    inner_iterations: int = 2
    outer_iterations: int = 0
    seasonal_jump: Optional[int] = None
    trend_jump: Optional[int] = None
    lowpass_jump: Optional[int] = None

    def __post_init__(self):
        if isinstance(self.period, float) and not self.period.is_integer():
            raise ValueError(f"non-integer period {self.period} is not supported")
        if int(self.period) != self.period or self.period < 2:
            raise ValueError(f"period must be an integer >= 2, got {self.period}")
        object.__setattr__(self, 'period', int(self.period))

        if self.seasonal_window != PERIODIC:
            _check_odd_window('seasonal_window', self.seasonal_window)
        for name in ('trend_window', 'lowpass_window'):
            value = getattr(self, name)
            if value is not None:
                _check_odd_window(name, value)
        for name in ('seasonal_jump', 'trend_jump', 'lowpass_jump'):
            value = getattr(self, name)
            if value is not None and (int(value) != value or value < 1):
                raise ValueError(f"{name} must be a positive integer, got {value}")

        if self.seasonal_degree not in (0, 1):
            raise ValueError(f"seasonal_degree must be 0 or 1, got {self.seasonal_degree}")
        if self.trend_degree not in (0, 1, 2):
            raise ValueError(f"trend_degree must be 0, 1 or 2, got {self.trend_degree}")
        if self.lowpass_degree not in (0, 1):
            raise ValueError(f"lowpass_degree must be 0 or 1, got {self.lowpass_degree}")
        if self.inner_iterations < 1:
            raise ValueError(f"inner_iterations must be positive, got {self.inner_iterations}")
        if self.outer_iterations < 0:
            raise ValueError(f"outer_iterations must be non-negative, got {self.outer_iterations}")

    @classmethod
    def build(cls, period: int, seasonal_window: SeasonalWindow = PERIODIC,
              robust: bool = False, **overrides) -> 'StlParams':
        """Params with the non-robust (2 inner, 0 outer) or robust (1 inner, 15 outer) loop counts"""
        fields = {
            'inner_iterations': 1 if robust else 2,
            'outer_iterations': 15 if robust else 0,
        }
        fields.update({k: v for k, v in overrides.items() if v is not None})
        return cls(period=period, seasonal_window=seasonal_window, **fields)

    @property
    def periodic(self) -> bool:
        return self.seasonal_window == PERIODIC

    def resolved(self, length: int) -> 'StlParams':
        """Fill derived windows and jumps for a series of ``length`` points"""
        # a periodic seasonal behaves like a window spanning the whole series
        seasonal = 10 * length + 1 if self.periodic else int(self.seasonal_window)
        trend = self.trend_window or next_odd(1.5 * self.period / (1.0 - 1.5 / seasonal))
        lowpass = self.lowpass_window or next_odd(self.period)
        return replace(
            self,
            trend_window=trend,
            lowpass_window=lowpass,
            seasonal_jump=self.seasonal_jump or int(math.ceil(seasonal / 10.0)),
            trend_jump=self.trend_jump or int(math.ceil(trend / 10.0)),
            lowpass_jump=self.lowpass_jump or int(math.ceil(lowpass / 10.0)),
        )

    def seasonal_span(self, length: int) -> int:
        return 10 * length + 1 if self.periodic else int(self.seasonal_window)


@dataclass
class StlFit:
    seasonal: np.ndarray
    trend: np.ndarray
    remainder: np.ndarray
    robustness_weights: np.ndarray


@njit(**JIT_OPTIONS)
def _moving_average(x, length, out):
    acc = 0.0
    for i in range(length):
        acc += x[i]
    out[0] = acc / length
    for i in range(1, x.shape[0] - length + 1):
        acc += x[i + length - 1] - x[i - 1]
        out[i] = acc / length


@njit(**JIT_OPTIONS)
def _weighted_mean(values, weights, use_weights):
    total = 0.0
    weight_sum = 0.0
    if use_weights:
        for i in range(values.shape[0]):
            total += weights[i] * values[i]
            weight_sum += weights[i]
        if weight_sum > 0.0:
            return total / weight_sum
        total = 0.0
    for i in range(values.shape[0]):
        total += values[i]
    return total / values.shape[0]


@njit(**JIT_OPTIONS)
def _cycle_subseries(y, period, ns, sdeg, sjump, rw, use_rw, periodic, out):
    """Smooth each cycle-subseries, extended one cycle at both ends (len(out) = n + 2*period)"""
    n = y.shape[0]
    max_k = (n + period - 1) // period
    sub_x = np.empty(max_k)
    sub_y = np.empty(max_k)
    sub_w = np.empty(max_k)
    sub_s = np.empty(max_k)
    for j in range(period):
        k = (n - j - 1) // period + 1
        for m in range(k):
            sub_x[m] = m + 1.0
            sub_y[m] = y[m * period + j]
            sub_w[m] = rw[m * period + j]
        xs = sub_x[:k]
        ys = sub_y[:k]
        ws = sub_w[:k]
        if periodic:
            mean = _weighted_mean(ys, ws, use_rw)
            for m in range(k + 2):
                out[m * period + j] = mean
        else:
            smoothed = sub_s[:k]
            _smooth(xs, ys, ws, use_rw, ns, sdeg, sjump, smoothed)
            out[j] = _fit_with_fallback(xs, ys, ws, use_rw, 0.0, ns, sdeg, smoothed[0])
            for m in range(k):
                out[(m + 1) * period + j] = smoothed[m]
            out[(k + 1) * period + j] = _fit_with_fallback(
                xs, ys, ws, use_rw, k + 1.0, ns, sdeg, smoothed[k - 1]
            )


@njit(**JIT_OPTIONS)
def _inner_loop(y, period, ns, sdeg, sjump, nt, tdeg, tjump, nl, ldeg, ljump,
                inner, rw, use_rw, periodic, season, trend):
    n = y.shape[0]
    positions = np.arange(1, n + 1).astype(np.float64)
    ones = np.ones(n)
    detrended = np.empty(n)
    cycle = np.empty(n + 2 * period)
    ma1 = np.empty(n + period + 1)
    ma2 = np.empty(n + 2)
    ma3 = np.empty(n)
    low = np.empty(n)
    deseason = np.empty(n)
    for _ in range(inner):
        for i in range(n):
            detrended[i] = y[i] - trend[i]
        _cycle_subseries(detrended, period, ns, sdeg, sjump, rw, use_rw, periodic, cycle)
        _moving_average(cycle, period, ma1)
        _moving_average(ma1, period, ma2)
        _moving_average(ma2, 3, ma3)
        _smooth(positions, ma3, ones, False, nl, ldeg, ljump, low)
        for i in range(n):
            season[i] = cycle[period + i] - low[i]
            deseason[i] = y[i] - season[i]
        _smooth(positions, deseason, rw, use_rw, nt, tdeg, tjump, trend)


@njit(**JIT_OPTIONS)
def _bisquare_weights(remainder, out):
    absr = np.abs(remainder)
    h = 6.0 * np.median(absr)
    for i in range(absr.shape[0]):
        if h <= 0.0:
            out[i] = 1.0 if absr[i] == 0.0 else 0.0
        else:
            u = absr[i] / h
            if u >= 1.0:
                out[i] = 0.0
            else:
                c = 1.0 - u * u
                out[i] = c * c


@njit(**JIT_OPTIONS)
def _stl(y, period, ns, sdeg, sjump, nt, tdeg, tjump, nl, ldeg, ljump,
         inner, outer, periodic, season, trend, rw):
    n = y.shape[0]
    for i in range(n):
        trend[i] = 0.0
        rw[i] = 1.0
    use_rw = False
    fit = np.empty(n)
    k = 0
    while True:
        _inner_loop(y, period, ns, sdeg, sjump, nt, tdeg, tjump, nl, ldeg, ljump,
                    inner, rw, use_rw, periodic, season, trend)
        k += 1
        if k > outer:
            break
        for i in range(n):
            fit[i] = y[i] - trend[i] - season[i]
        _bisquare_weights(fit, rw)
        use_rw = True
    if outer <= 0:
        for i in range(n):
            rw[i] = 1.0


def bisquare_robustness(remainder) -> np.ndarray:
    """Bisquare weights with cutoff six times the median absolute remainder"""
    remainder = np.ascontiguousarray(remainder, dtype=np.float64)
    if remainder.size == 0:
        raise ValueError("remainder must be nonempty")
    out = np.empty_like(remainder)
    _bisquare_weights(remainder, out)
    return out


def periodic_seasonal(values, period: int, weights=None) -> np.ndarray:
    """Replace every cycle-subseries by its (weighted) mean"""
    values = np.ascontiguousarray(values, dtype=np.float64)
    period = int(period)
    if values.shape[0] < period:
        raise ValueError(f"series of length {values.shape[0]} is shorter than period {period}")
    use_weights = weights is not None
    weights = np.ones_like(values) if weights is None else np.ascontiguousarray(weights, dtype=np.float64)
    out = np.empty_like(values)
    for phase in range(period):
        out[phase::period] = _weighted_mean(values[phase::period].copy(), weights[phase::period].copy(), use_weights)
    return out


def stl_decompose(values, params: StlParams) -> StlFit:
    """
    Decompose ``values`` into seasonal, trend and remainder at ``params.period``.

    The remainder is defined by subtraction, so the three components
    reconstruct the input up to rounding.
    """
    y = np.ascontiguousarray(values, dtype=np.float64)
    n = y.shape[0]
    period = params.period
    if y.ndim != 1:
        raise ValueError("values must be one-dimensional")
    if n < 2 * period:
        raise ValueError(f"series of length {n} has fewer than two periods of {period}")
    if not np.all(np.isfinite(y)):
        bad = int(np.flatnonzero(~np.isfinite(y))[0])
        raise ValueError(f"non-finite value at index {bad}; interpolate missing values first")

    p = params.resolved(n)
    season = np.empty(n)
    trend = np.empty(n)
    rw = np.empty(n)
    _stl(
        y, period,
        p.seasonal_span(n), p.seasonal_degree, p.seasonal_jump,
        p.trend_window, p.trend_degree, p.trend_jump,
        p.lowpass_window, p.lowpass_degree, p.lowpass_jump,
        p.inner_iterations, p.outer_iterations, p.periodic,
        season, trend, rw,
    )
    remainder = (y - season) - trend
    return StlFit(seasonal=season, trend=trend, remainder=remainder, robustness_weights=rw)
