"""
Locally weighted polynomial regression (loess) on one-dimensional series.

The jitted kernels here are the numerical substrate of the STL code in
``core.stl``; the public functions validate their inputs and wrap them.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
from numba import njit

logger = logging.getLogger(__name__)

# fastmath stays off: polynomial reproduction is checked to 1e-10
JIT_OPTIONS = dict(cache=True, nogil=True, fastmath=False)

# relative determinant below which a local fit drops one degree
RANK_TOLERANCE = 1e-10


class DegenerateNeighborhoodError(ValueError):
    """Every effective weight in a loess neighborhood is zero"""


@dataclass(frozen=True)
class LoessConfig:
    """Neighborhood size (q), local polynomial degree and evaluation stride"""

    window_width: int
    degree: int = 1
    jump: int = 1

    def __post_init__(self):
        if int(self.window_width) != self.window_width or self.window_width < 1:
            raise ValueError(f"window_width must be a positive integer, got {self.window_width}")
        if self.window_width % 2 == 0:
            raise ValueError(f"window_width must be odd, got {self.window_width}")
        if self.degree not in (0, 1, 2):
            raise ValueError(f"degree must be 0, 1 or 2, got {self.degree}")
        if self.window_width < self.degree + 1:
            raise ValueError(
                f"window_width {self.window_width} too small for degree {self.degree}"
            )
        if int(self.jump) != self.jump or self.jump < 1:
            raise ValueError(f"jump must be a positive integer, got {self.jump}")


@dataclass
class WeightedSeries:
    """Observations at strictly increasing positions with robustness weights"""

    positions: np.ndarray
    values: np.ndarray
    robustness_weights: Optional[np.ndarray] = None

    def __post_init__(self):
        self.positions = np.ascontiguousarray(self.positions, dtype=np.float64)
        self.values = np.ascontiguousarray(self.values, dtype=np.float64)
        if self.robustness_weights is None:
            self.robustness_weights = np.ones_like(self.values)
        else:
            self.robustness_weights = np.ascontiguousarray(self.robustness_weights, dtype=np.float64)

        n = self.values.shape[0]
        if self.positions.ndim != 1 or self.values.ndim != 1:
            raise ValueError("positions and values must be one-dimensional")
        if self.positions.shape[0] != n or self.robustness_weights.shape[0] != n:
            raise ValueError(
                f"length mismatch: positions={self.positions.shape[0]}, values={n}, "
                f"weights={self.robustness_weights.shape[0]}"
            )
        if n > 1 and not np.all(np.diff(self.positions) > 0):
            raise ValueError("positions must be strictly increasing")
        if np.any(self.robustness_weights < 0):
            raise ValueError("robustness weights must be non-negative")

    @classmethod
    def from_values(cls, values, robustness_weights=None) -> 'WeightedSeries':
        """Series observed at the integer positions 1..n"""
        values = np.asarray(values, dtype=np.float64)
        positions = np.arange(1, values.shape[0] + 1, dtype=np.float64)
        return cls(positions, values, robustness_weights)

    def __len__(self):
        return self.values.shape[0]


@njit(**JIT_OPTIONS)
def _tricube(u):
    a = abs(u)
    if a >= 1.0:
        return 0.0
    c = 1.0 - a * a * a
    return c * c * c


@njit(**JIT_OPTIONS)
def _window_bounds(x, at, q):
    """Inclusive index range of the q positions nearest to ``at``"""
    n = x.shape[0]
    if q >= n:
        return 0, n - 1
    i = np.searchsorted(x, at)
    lo = i
    hi = i
    for _ in range(q):
        if lo == 0:
            hi += 1
        elif hi == n:
            lo -= 1
        elif at - x[lo - 1] <= x[hi] - at:
            lo -= 1
        else:
            hi += 1
    return lo, hi - 1


@njit(**JIT_OPTIONS)
def _fit_at(x, y, rw, use_rw, at, q, degree, lo, hi):
    """Local polynomial value at ``at`` over x[lo..hi]; second item False when degenerate"""
    n = x.shape[0]
    h = max(at - x[lo], x[hi] - at)
    if q > n:
        h = h * q / n

    s0 = 0.0
    s1 = 0.0
    s2 = 0.0
    s3 = 0.0
    s4 = 0.0
    t0 = 0.0
    t1 = 0.0
    t2 = 0.0
    for j in range(lo, hi + 1):
        d = x[j] - at
        if h > 0.0:
            u = d / h
            w = _tricube(u)
        else:
            u = 0.0
            w = 1.0
        if use_rw:
            w *= rw[j]
        if w <= 0.0:
            continue
        wu = w * u
        wuu = wu * u
        s0 += w
        s1 += wu
        s2 += wuu
        s3 += wuu * u
        s4 += wuu * u * u
        t0 += w * y[j]
        t1 += wu * y[j]
        t2 += wuu * y[j]

    if s0 <= 0.0:
        return 0.0, False

    # moments are taken around ``at``, so the intercept is the fitted value
    if degree >= 2:
        det = s0 * (s2 * s4 - s3 * s3) - s1 * (s1 * s4 - s3 * s2) + s2 * (s1 * s3 - s2 * s2)
        if det > RANK_TOLERANCE * s0 * s0 * s0:
            num = t0 * (s2 * s4 - s3 * s3) - s1 * (t1 * s4 - s3 * t2) + s2 * (t1 * s3 - s2 * t2)
            return num / det, True
    if degree >= 1:
        det = s0 * s2 - s1 * s1
        if det > RANK_TOLERANCE * s0 * s0:
            return (s2 * t0 - s1 * t1) / det, True
    return t0 / s0, True


@njit(**JIT_OPTIONS)
def _fit_with_fallback(x, y, rw, use_rw, at, q, degree, fallback):
    lo, hi = _window_bounds(x, at, q)
    value, ok = _fit_at(x, y, rw, use_rw, at, q, degree, lo, hi)
    if not ok and use_rw:
        value, ok = _fit_at(x, y, rw, False, at, q, degree, lo, hi)
    if not ok:
        return fallback
    return value


@njit(**JIT_OPTIONS)
def _smooth(x, y, rw, use_rw, q, degree, jump, out):
    """Fit every ``jump``-th position plus the last one, interpolate in between"""
    n = x.shape[0]
    step = max(jump, 1)
    last = -1
    i = 0
    while True:
        out[i] = _fit_with_fallback(x, y, rw, use_rw, x[i], q, degree, y[i])
        if last >= 0 and i - last > 1:
            span = x[i] - x[last]
            for k in range(last + 1, i):
                frac = (x[k] - x[last]) / span
                out[k] = out[last] + frac * (out[i] - out[last])
        if i == n - 1:
            break
        last = i
        i = min(i + step, n - 1)


def tricube_weight(u: float) -> float:
    """(1 - |u|^3)^3 inside the unit interval, zero outside"""
    return float(_tricube(float(u)))


def loess_fit_point(series: WeightedSeries, at: float, cfg: LoessConfig) -> float:
    """
    Fitted value at ``at`` from a weighted local polynomial over the
    ``cfg.window_width`` nearest positions.

    Raises:
        DegenerateNeighborhoodError: all effective weights in the window are zero
    """
    if len(series) == 0:
        raise ValueError("cannot fit an empty series")
    x = series.positions
    lo, hi = _window_bounds(x, float(at), cfg.window_width)
    value, ok = _fit_at(
        x, series.values, series.robustness_weights, True,
        float(at), cfg.window_width, cfg.degree, lo, hi,
    )
    if not ok:
        raise DegenerateNeighborhoodError(
            f"all weights vanish in the neighborhood of position {at} "
            f"(window {x[lo]}..{x[hi]})"
        )
    return float(value)


def loess_smooth(series: WeightedSeries, cfg: LoessConfig) -> np.ndarray:
    """
    Loess fit at every position of ``series``.

    Positions skipped by ``cfg.jump`` are linearly interpolated between their
    directly evaluated neighbors; both endpoints are always evaluated. A
    neighborhood whose robustness weights are all zero is refit without them.
    """
    if len(series) == 0:
        raise ValueError("cannot smooth an empty series")
    out = np.empty(len(series), dtype=np.float64)
    _smooth(
        series.positions, series.values, series.robustness_weights, True,
        cfg.window_width, cfg.degree, cfg.jump, out,
    )
    return out
