"""
Synthetic multi-seasonal series with known components.

A series is T + alpha * S_short + beta * S_long + gamma * R, where the trend
and the two seasonals are normalised to mean zero and unit variance and R is
standard normal noise. Each component draws from its own Philox substream of
the series seed, so changing one component's settings leaves the others'
draws untouched.
"""

import logging
from dataclasses import asdict, dataclass
from typing import Dict, Optional, Tuple

import numpy as np

logger = logging.getLogger(__name__)

DETERMINISTIC = 'deterministic'
STOCHASTIC = 'stochastic'
DGP_CHOICES = (DETERMINISTIC, STOCHASTIC)

DAILY = 'daily'
HOURLY = 'hourly'
FREQUENCY_PERIODS = {
    DAILY: (7, 365),
    HOURLY: (24, 168),
}
FREQUENCY_LENGTHS = {
    DAILY: 365 * 3 + 1,
    HOURLY: 168 * 3 + 1,
}

SEASONAL_WALK = 'walk'
SEASONAL_IID = 'iid'

# Fourier pairs in every generated seasonal
HARMONICS = 5

# substream keys under a series seed
STREAM_TREND = 0
STREAM_SEASONAL_SHORT = 1
STREAM_SEASONAL_LONG = 2
STREAM_REMAINDER = 3

# (dgp, alpha, beta, gamma, sigma2) rows of the simulation study
PARAMETER_SETS = (
    (DETERMINISTIC, 1.0, 1.0, 0.2, 0.0),
    (DETERMINISTIC, 1.0, 1.0, 0.4, 0.0),
    (DETERMINISTIC, 1.0, 1.0, 0.6, 0.0),
    (STOCHASTIC, 1.0, 1.0, 0.2, 0.025),
    (STOCHASTIC, 1.0, 1.0, 0.4, 0.050),
    (STOCHASTIC, 1.0, 1.0, 0.6, 0.075),
)

# rows used when searching for default seasonal windows
SWINDOW_STUDY_SETS = tuple(row for row in PARAMETER_SETS if row[0] == STOCHASTIC)

SEED_LIMIT = 2 ** 64


def substream(seed: int, stream: int) -> np.random.Generator:
    """Philox generator for one component stream of ``seed``"""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(stream,))))


def series_seed(base_seed: int, index: int) -> int:
    """Seed of the ``index``-th series of a corpus generated from ``base_seed``"""
    return int(np.random.SeedSequence([base_seed, index]).generate_state(1, np.uint64)[0])


def normalise(values) -> np.ndarray:
    """Shift and scale to mean 0 and (population) variance 1"""
    x = np.asarray(values, dtype=np.float64)
    std = x.std()
    if not std > 0:
        raise ValueError("cannot normalise a series with zero variance")
    return (x - x.mean()) / std


def quadratic_trend(length: int, n1: float, n2: float) -> np.ndarray:
    """n1 * (t + length/2 * (n2 - 1))**2 for t = 1..length"""
    t = np.arange(1, length + 1, dtype=np.float64)
    return n1 * (t + (length / 2.0) * (n2 - 1.0)) ** 2


def _phase_angles(length: int, period: int) -> np.ndarray:
    # phase is reduced modulo the period so repeated cycles are bit-identical
    phase = np.arange(1, length + 1) % period
    k = np.arange(1, HARMONICS + 1)
    return 2.0 * np.pi * np.outer(phase, k) / period


def fourier_path(length: int, period: int, a_path: np.ndarray, b_path: np.ndarray) -> np.ndarray:
    """sum_k a_k sin(2 pi k t / period) + b_k cos(...) with per-observation coefficient rows"""
    angles = _phase_angles(length, period)
    return np.sum(a_path * np.sin(angles) + b_path * np.cos(angles), axis=1)


def fourier_seasonal(length: int, period: int, a, b) -> np.ndarray:
    """Fourier seasonal with fixed coefficients ``a`` (sine) and ``b`` (cosine)"""
    a = np.broadcast_to(np.asarray(a, dtype=np.float64), (length, HARMONICS))
    b = np.broadcast_to(np.asarray(b, dtype=np.float64), (length, HARMONICS))
    return fourier_path(length, period, a, b)


def integrated_trend(eps) -> np.ndarray:
    """I(2) path: T_t = 2 T_{t-1} - T_{t-2} + eps_t from zero initial values"""
    return np.cumsum(np.cumsum(np.asarray(eps, dtype=np.float64)))


def seasonal_coefficient_path(initial: np.ndarray, increments: np.ndarray, walk: bool = True) -> np.ndarray:
    """
    Coefficients in force during each seasonal cycle.

    Cycle 0 uses ``initial``; cycle c > 0 adds increments[c - 1], either
    accumulated (random walk) or alone (i.i.d. jitter around ``initial``).
    """
    initial = np.asarray(initial, dtype=np.float64)
    if increments.shape[0] == 0:
        return initial[np.newaxis, :]
    shifts = np.cumsum(increments, axis=0) if walk else increments
    return np.vstack([initial[np.newaxis, :], initial + shifts])


def gen_deterministic_trend(length: int, rng: np.random.Generator) -> np.ndarray:
    if length < 2:
        raise ValueError(f"trend length must be at least 2, got {length}")
    while True:
        n1, n2 = rng.standard_normal(2)
        raw = quadratic_trend(length, n1, n2)
        if raw.std() > 0:
            return normalise(raw)
        logger.debug("Redrawing degenerate quadratic trend coefficients")


def gen_deterministic_seasonal(length: int, period: int, rng: np.random.Generator) -> np.ndarray:
    if period < 2:
        raise ValueError(f"period must be at least 2, got {period}")
    a = rng.standard_normal(HARMONICS)
    b = rng.standard_normal(HARMONICS)
    return normalise(fourier_seasonal(length, period, a, b))


def gen_stochastic_trend(length: int, rng: np.random.Generator) -> np.ndarray:
    if length < 3:
        raise ValueError(f"trend length must be at least 3, got {length}")
    return normalise(integrated_trend(rng.standard_normal(length)))


def stochastic_coefficient_path(cycles: int, sigma2: float, rng: np.random.Generator,
                                walk: bool = True) -> np.ndarray:
    """Sine then cosine coefficients for each of ``cycles`` cycles, one row per cycle"""
    a = rng.standard_normal(HARMONICS)
    b = rng.standard_normal(HARMONICS)
    increments = rng.standard_normal((cycles - 1, 2 * HARMONICS)) * np.sqrt(sigma2)
    return seasonal_coefficient_path(np.concatenate([a, b]), increments, walk=walk)


def gen_stochastic_seasonal(length: int, period: int, sigma2: float, rng: np.random.Generator,
                            walk: bool = True) -> np.ndarray:
    """
    Fourier seasonal whose coefficients receive N(0, sigma2) increments at the
    start of every new cycle. With sigma2 = 0 this reproduces
    ``gen_deterministic_seasonal`` for the same generator state.
    """
    if period < 2:
        raise ValueError(f"period must be at least 2, got {period}")
    if sigma2 < 0:
        raise ValueError(f"sigma2 must be non-negative, got {sigma2}")
    cycles = (length - 1) // period + 1
    path = stochastic_coefficient_path(cycles, sigma2, rng, walk=walk)
    cycle = np.arange(length) // period
    return normalise(fourier_path(length, period, path[cycle, :HARMONICS], path[cycle, HARMONICS:]))


@dataclass(frozen=True)
class SimulationConfig:
    dgp: str
    alpha: float = 1.0
    beta: float = 1.0
    gamma: float = 0.2
    sigma2: float = 0.0
    frequency: str = DAILY
    length: Optional[int] = None
    seed: int = 0
    seasonal_noise: str = SEASONAL_WALK

    def __post_init__(self):
        if self.dgp not in DGP_CHOICES:
            raise ValueError(f"dgp must be one of {DGP_CHOICES}, got '{self.dgp}'")
        if self.frequency not in FREQUENCY_PERIODS:
            raise ValueError(f"frequency must be one of {tuple(FREQUENCY_PERIODS)}, got '{self.frequency}'")
        if self.seasonal_noise not in (SEASONAL_WALK, SEASONAL_IID):
            raise ValueError(f"seasonal_noise must be '{SEASONAL_WALK}' or '{SEASONAL_IID}', got '{self.seasonal_noise}'")
        if self.sigma2 < 0:
            raise ValueError(f"sigma2 must be non-negative, got {self.sigma2}")
        if self.dgp == DETERMINISTIC and self.sigma2 != 0:
            raise ValueError(f"deterministic DGP requires sigma2 = 0, got {self.sigma2}")
        if self.length is None:
            object.__setattr__(self, 'length', FREQUENCY_LENGTHS[self.frequency])
        if int(self.length) != self.length or self.length < 3:
            raise ValueError(f"length must be an integer of at least 3, got {self.length}")
        if int(self.seed) != self.seed or not (0 <= self.seed < SEED_LIMIT):
            raise ValueError(f"seed must be an integer in [0, 2**64), got {self.seed}")
        object.__setattr__(self, 'length', int(self.length))
        object.__setattr__(self, 'seed', int(self.seed))

    @property
    def periods(self) -> Tuple[int, int]:
        return FREQUENCY_PERIODS[self.frequency]

    @property
    def weights(self) -> Tuple[float, float, float]:
        return (self.alpha, self.beta, self.gamma)

    def to_dict(self) -> Dict:
        return asdict(self)


@dataclass
class GroundTruth:
    composite: np.ndarray
    trend: np.ndarray
    seasonal_short: np.ndarray
    seasonal_long: np.ndarray
    remainder: np.ndarray
    config: SimulationConfig

    @property
    def periods(self) -> Tuple[int, int]:
        return self.config.periods

    @property
    def weights(self) -> Tuple[float, float, float]:
        return self.config.weights


def simulate_series(cfg: SimulationConfig) -> GroundTruth:
    """Draw one series and its components according to ``cfg``"""
    short_period, long_period = cfg.periods
    n = cfg.length

    if cfg.dgp == DETERMINISTIC:
        trend = gen_deterministic_trend(n, substream(cfg.seed, STREAM_TREND))
        seasonal_short = gen_deterministic_seasonal(n, short_period, substream(cfg.seed, STREAM_SEASONAL_SHORT))
        seasonal_long = gen_deterministic_seasonal(n, long_period, substream(cfg.seed, STREAM_SEASONAL_LONG))
    else:
        walk = cfg.seasonal_noise == SEASONAL_WALK
        trend = gen_stochastic_trend(n, substream(cfg.seed, STREAM_TREND))
        seasonal_short = gen_stochastic_seasonal(
            n, short_period, cfg.sigma2, substream(cfg.seed, STREAM_SEASONAL_SHORT), walk=walk
        )
        seasonal_long = gen_stochastic_seasonal(
            n, long_period, cfg.sigma2, substream(cfg.seed, STREAM_SEASONAL_LONG), walk=walk
        )
    remainder = substream(cfg.seed, STREAM_REMAINDER).standard_normal(n)

    composite = trend + cfg.alpha * seasonal_short + cfg.beta * seasonal_long + cfg.gamma * remainder
    return GroundTruth(
        composite=composite,
        trend=trend,
        seasonal_short=seasonal_short,
        seasonal_long=seasonal_long,
        remainder=remainder,
        config=cfg,
    )
