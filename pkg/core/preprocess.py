"""
Missing-value interpolation and Box-Cox transformation, applied to a series
before it is decomposed.
"""

import logging
from typing import TYPE_CHECKING

import numpy as np
from scipy import special

if TYPE_CHECKING:
    from .mstl import MultiSeasonalSeries

logger = logging.getLogger(__name__)

# harmonic pairs per period in the seasonal surrogate
MAX_HARMONICS = 5


def validate_lambda(lam: float) -> float:
    lam = float(lam)
    if not np.isfinite(lam) or lam < 0.0 or lam > 1.0:
        raise ValueError(f"Box-Cox lambda must lie in [0, 1], got {lam}")
    return lam


def boxcox(values, lam: float) -> np.ndarray:
    """
    Box-Cox transform: ln(x) when lam is 0, (x**lam - 1) / lam otherwise.

    Raises:
        ValueError: a value is non-positive under the log transform, or the
            power transform is not real-valued
    """
    lam = validate_lambda(lam)
    x = np.asarray(values, dtype=np.float64)

    if lam == 0.0:
        bad = np.flatnonzero(~(x > 0))
        if bad.size:
            raise ValueError(
                f"log transform needs positive values; index {int(bad[0])} holds {x[bad[0]]}"
            )

    y = special.boxcox(x, lam)
    bad = np.flatnonzero(~np.isfinite(y))
    if bad.size:
        raise ValueError(
            f"Box-Cox transform with lambda={lam} is undefined at index {int(bad[0])} "
            f"(value {x[bad[0]]})"
        )
    return y


def inv_boxcox(values, lam: float) -> np.ndarray:
    """Inverse of ``boxcox``; lam * y + 1 must stay positive when lam > 0"""
    lam = validate_lambda(lam)
    y = np.asarray(values, dtype=np.float64)
    if lam > 0.0:
        bad = np.flatnonzero(~(lam * y + 1.0 > 0))
        if bad.size:
            raise ValueError(
                f"inverse Box-Cox with lambda={lam} is undefined at index {int(bad[0])} "
                f"(value {y[bad[0]]})"
            )
    return special.inv_boxcox(y, lam)


def _fourier_design(positions: np.ndarray, periods) -> np.ndarray:
    """Columns of sin/cos pairs, min(p // 2, MAX_HARMONICS) per period"""
    columns = []
    for period in periods:
        for k in range(1, min(period // 2, MAX_HARMONICS) + 1):
            angle = 2.0 * np.pi * k * positions / period
            columns.append(np.sin(angle))
            columns.append(np.cos(angle))
    return np.column_stack(columns)


def _seasonal_surrogate(values: np.ndarray, observed: np.ndarray, periods) -> np.ndarray:
    """Least-squares Fourier fit (with intercept and slope) evaluated at every position"""
    t = np.arange(1, values.shape[0] + 1, dtype=np.float64)
    fourier = _fourier_design(t, periods)
    design = np.column_stack([np.ones_like(t), t, fourier])
    coef, *_ = np.linalg.lstsq(design[observed], values[observed], rcond=None)
    return fourier @ coef[2:]


def interpolate_missing(series: 'MultiSeasonalSeries') -> np.ndarray:
    """
    Fill missing (NaN) values of ``series``.

    Without retained periods the gaps are linearly interpolated, with the
    nearest observation carried out to the edges. With retained periods a
    Fourier surrogate of the seasonality is fitted to the observed points,
    the seasonally adjusted series is interpolated linearly, and the
    surrogate is added back at the missing positions. Observed values are
    never modified.
    """
    from .mstl import retain_periods

    values = np.asarray(series.values, dtype=np.float64)
    n = values.shape[0]
    observed = np.isfinite(values)
    count = int(observed.sum())

    if count == n:
        return values.copy()
    if count < 2:
        raise ValueError(f"need at least 2 observed values to interpolate, found {count}")

    index = np.flatnonzero(observed)
    leading, trailing = int(index[0]), int(n - 1 - index[-1])
    if max(leading, trailing) > n / 2:
        raise ValueError(
            f"edge gap too long to interpolate (leading {leading}, trailing {trailing}, length {n})"
        )

    logger.debug(f"Interpolating {n - count} missing values in series of length {n}")

    periods = retain_periods(series.periods, n)
    positions = np.arange(n, dtype=np.float64)
    filled = values.copy()
    if periods:
        surrogate = _seasonal_surrogate(values, observed, periods)
        adjusted = values[observed] - surrogate[observed]
        filled[~observed] = (
            np.interp(positions[~observed], positions[observed], adjusted)
            + surrogate[~observed]
        )
    else:
        filled[~observed] = np.interp(positions[~observed], positions[observed], values[observed])
    return filled
