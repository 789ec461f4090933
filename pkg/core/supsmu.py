"""
Friedman's variable-span super smoother.

Used as the trend estimator when a series has no retained seasonal period.
Observations are assumed equally spaced; unit weights throughout.
"""

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from numba import njit

from .loess import JIT_OPTIONS

logger = logging.getLogger(__name__)

# fixed constants of the three-pass scheme
BIG = 1.0e20
SMALL = 1.0e-7
VARIANCE_EPS = 1.0e-3

# below this length only the midrange running line is used
MIN_CV_LENGTH = 10


@dataclass(frozen=True)
class SupsmuConfig:
    """Tweeter/midrange/woofer span fractions and the bass (low-frequency) control"""

    spans: Tuple[float, float, float] = (0.05, 0.2, 0.5)
    bass: float = 0.0

    def __post_init__(self):
        spans = tuple(float(s) for s in self.spans)
        if len(spans) != 3:
            raise ValueError(f"supsmu needs exactly three spans, got {len(spans)}")
        if any(s <= 0.0 or s > 1.0 for s in spans):
            raise ValueError(f"spans must lie in (0, 1], got {spans}")
        if not (spans[0] < spans[1] < spans[2]):
            raise ValueError(f"spans must be strictly increasing, got {spans}")
        if not (0.0 <= self.bass <= 10.0):
            raise ValueError(f"bass must lie in [0, 10], got {self.bass}")
        object.__setattr__(self, 'spans', spans)


def span_count(span: float, n: int) -> int:
    """Odd neighbor count for a span fraction on ``n`` points, at least 5 and never above n"""
    half = max(int(0.5 * span * n + 0.5), 2)
    limit = n if n % 2 == 1 else n - 1
    return min(2 * half + 1, limit)


@njit(**JIT_OPTIONS)
def _running_line(x, y, count, vsmlsq, want_cv, smo, acvr):
    n = x.shape[0]
    half = (count - 1) // 2
    xm = 0.0
    ym = 0.0
    var = 0.0
    cvar = 0.0
    fbw = 0.0
    for i in range(count):
        xi = x[i]
        fbo = fbw
        fbw += 1.0
        xm = (fbo * xm + xi) / fbw
        ym = (fbo * ym + y[i]) / fbw
        tmp = 0.0
        if fbo > 0.0:
            tmp = fbw * (xi - xm) / fbo
        var += tmp * (xi - xm)
        cvar += tmp * (y[i] - ym)

    for j in range(n):
        out = j - half - 1
        inn = j + half
        if out >= 0 and inn < n:
            xo = x[out]
            fbo = fbw
            fbw -= 1.0
            tmp = 0.0
            if fbw > 0.0:
                tmp = fbo * (xo - xm) / fbw
            var -= tmp * (xo - xm)
            cvar -= tmp * (y[out] - ym)
            if fbw > 0.0:
                xm = (fbo * xm - xo) / fbw
                ym = (fbo * ym - y[out]) / fbw

            xi = x[inn]
            fbo = fbw
            fbw += 1.0
            xm = (fbo * xm + xi) / fbw
            ym = (fbo * ym + y[inn]) / fbw
            tmp = 0.0
            if fbo > 0.0:
                tmp = fbw * (xi - xm) / fbo
            var += tmp * (xi - xm)
            cvar += tmp * (y[inn] - ym)

        slope = 0.0
        if var > vsmlsq:
            slope = cvar / var
        smo[j] = slope * (x[j] - xm) + ym

        if want_cv:
            h = 1.0 / fbw
            if var > vsmlsq:
                h += (x[j] - xm) ** 2 / var
            denom = 1.0 - h
            if denom > 0.0:
                acvr[j] = abs(y[j] - smo[j]) / denom
            elif j > 0:
                acvr[j] = acvr[j - 1]
            else:
                acvr[j] = 0.0

    # tied abscissae share the mean of their fits
    j = 0
    while j < n:
        j0 = j
        total = smo[j]
        while j + 1 < n and x[j + 1] <= x[j]:
            j += 1
            total += smo[j]
        if j > j0:
            mean = total / (j - j0 + 1)
            for i in range(j0, j + 1):
                smo[i] = mean
        j += 1


def _variance_floor(x: np.ndarray) -> float:
    n = x.shape[0]
    i = n // 4
    j = 3 * i
    scale = x[j] - x[i] if n >= 4 else x[-1] - x[0]
    while scale <= 0.0 and (j < n - 1 or i > 0):
        j = min(j + 1, n - 1)
        i = max(i - 1, 0)
        scale = x[j] - x[i]
    return (VARIANCE_EPS * scale) ** 2


def _check_xy(x, y) -> Tuple[np.ndarray, np.ndarray]:
    x = np.ascontiguousarray(x, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.float64)
    if x.ndim != 1 or x.shape != y.shape:
        raise ValueError(f"x and y must be one-dimensional of equal length, got {x.shape} and {y.shape}")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise ValueError("supsmu input contains non-finite values")
    if x.shape[0] > 1 and np.any(np.diff(x) < 0):
        raise ValueError("x must be sorted ascending")
    return x, y


def running_linear_smooth(x, y, span_count: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Running least-squares line over the ``span_count`` nearest neighbors of
    each point (windows are clamped at the edges), maintained with O(1)
    running-sum updates.

    Returns:
        (fit, cv_residual) where cv_residual is the absolute leave-one-out
        residual |y - fit| / (1 - hat)
    """
    x, y = _check_xy(x, y)
    n = x.shape[0]
    if int(span_count) != span_count or span_count % 2 == 0 or not (3 <= span_count <= n):
        raise ValueError(f"span_count must be odd and within [3, {n}], got {span_count}")
    fit = np.empty(n)
    cv = np.empty(n)
    _running_line(x, y, int(span_count), _variance_floor(x), True, fit, cv)
    return fit, cv


def _smooth(x, y, span, vsmlsq, want_cv=False):
    n = x.shape[0]
    fit = np.empty(n)
    cv = np.empty(n)
    _running_line(x, y, span_count(span, n), vsmlsq, want_cv, fit, cv)
    return fit, cv


def supsmu_smooth(values, cfg: SupsmuConfig = SupsmuConfig()) -> np.ndarray:
    """Super-smoothed trend of ``values`` observed at positions 1..n"""
    y = np.ascontiguousarray(values, dtype=np.float64)
    n = y.shape[0]
    if n < 3:
        raise ValueError(f"supsmu needs at least 3 points, got {n}")
    x = np.arange(1, n + 1, dtype=np.float64)
    x, y = _check_xy(x, y)
    vsmlsq = _variance_floor(x)
    tweeter, midrange, woofer = cfg.spans

    if n < MIN_CV_LENGTH:
        logger.debug(f"Series of length {n} too short for span selection, using midrange smoother")
        return _smooth(x, y, midrange, vsmlsq)[0]

    fits = []
    residuals = []
    for span in cfg.spans:
        fit, cv = _smooth(x, y, span, vsmlsq, want_cv=True)
        fits.append(fit)
        residuals.append(_smooth(x, cv, midrange, vsmlsq)[0])

    best_span = np.empty(n)
    for j in range(n):
        resmin = BIG
        # <= so that ties go to the larger span
        for span, res in zip(cfg.spans, residuals):
            if res[j] <= resmin:
                resmin = res[j]
                best_span[j] = span
        if 0.0 < cfg.bass <= 10.0 and 0.0 < resmin < residuals[2][j]:
            ratio = max(SMALL, resmin / residuals[2][j])
            best_span[j] += (woofer - best_span[j]) * ratio ** (10.0 - cfg.bass)

    span_curve = np.clip(_smooth(x, best_span, midrange, vsmlsq)[0], tweeter, woofer)
    blended = np.empty(n)
    upper = span_curve >= midrange
    f_up = (span_curve[upper] - midrange) / (woofer - midrange)
    blended[upper] = (1.0 - f_up) * fits[1][upper] + f_up * fits[2][upper]
    f_down = (midrange - span_curve[~upper]) / (midrange - tweeter)
    blended[~upper] = (1.0 - f_down) * fits[1][~upper] + f_down * fits[0][~upper]

    return _smooth(x, blended, tweeter, vsmlsq)[0]
