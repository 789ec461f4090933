"""
Moving block bootstrap of decomposition remainders.

Replicates are the decomposition's trend and seasonals plus a block-resampled
remainder, so the decomposition itself serves as their ground truth.
"""

import logging
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence

import numpy as np

from .mstl import Decomposition

logger = logging.getLogger(__name__)

# used when a series has no seasonal period to size blocks from
NONSEASONAL_BLOCK = 8


@dataclass(frozen=True)
class MbbConfig:
    block_length: int
    replicates: int = 1
    seed: int = 0

    def __post_init__(self):
        if int(self.block_length) != self.block_length or self.block_length < 1:
            raise ValueError(f"block_length must be a positive integer, got {self.block_length}")
        if int(self.replicates) != self.replicates or self.replicates < 1:
            raise ValueError(f"replicates must be a positive integer, got {self.replicates}")
        if int(self.seed) != self.seed or not (0 <= self.seed < 2 ** 64):
            raise ValueError(f"seed must be an integer in [0, 2**64), got {self.seed}")


def default_block_length(periods: Sequence[int], length: int) -> int:
    """Twice the longest period, capped at half the series"""
    cap = max(length // 2, 1)
    wanted = 2 * max(periods) if periods else NONSEASONAL_BLOCK
    block = max(min(wanted, cap), 1)
    if block < wanted:
        logger.debug(f"Block length {wanted} capped to {block}, half of the {length}-point series")
    return block


def replicate_rng(seed: int, replicate: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(replicate,))))


def mbb_resample(remainder, cfg: MbbConfig, rng: Optional[np.random.Generator] = None,
                 offset: Optional[int] = None) -> np.ndarray:
    """
    Concatenate n // l + 2 blocks of length l drawn uniformly from the
    overlapping blocks of ``remainder``, drop a random head offset in [0, l)
    and truncate to n. ``offset`` pins the head offset.
    """
    x = np.asarray(remainder, dtype=np.float64)
    n = x.shape[0]
    block = int(cfg.block_length)
    if block > n:
        raise ValueError(f"block_length {block} exceeds series length {n}")
    rng = rng if rng is not None else replicate_rng(cfg.seed, 0)

    count = n // block + 2
    starts = rng.integers(0, n - block + 1, size=count)
    drawn_offset = int(rng.integers(0, block))
    if offset is None:
        offset = drawn_offset
    if not (0 <= offset < block):
        raise ValueError(f"offset must lie in [0, {block}), got {offset}")

    blocks = x[starts[:, np.newaxis] + np.arange(block)[np.newaxis, :]]
    return blocks.reshape(-1)[offset:offset + n].copy()


def perturb_series(series, decomposition: Decomposition, cfg: MbbConfig,
                   resample: Optional[Callable[[np.ndarray, MbbConfig, np.random.Generator], np.ndarray]] = None
                   ) -> List[np.ndarray]:
    """
    ``cfg.replicates`` series, each the decomposition's trend and seasonals
    plus a resampled remainder. Replicates live on the decomposition's scale.
    ``resample`` replaces ``mbb_resample`` (the identity returns ``series``).
    """
    values = np.asarray(series, dtype=np.float64)
    if values.shape[0] != len(decomposition):
        raise ValueError(
            f"series length {values.shape[0]} does not match decomposition length {len(decomposition)}"
        )
    resample = resample or mbb_resample
    structure = decomposition.trend + decomposition.seasonal_sum

    replicates = []
    for r in range(cfg.replicates):
        noise = resample(decomposition.remainder, cfg, replicate_rng(cfg.seed, r))
        if noise.shape[0] != values.shape[0]:
            raise ValueError(f"resampled remainder has length {noise.shape[0]}, expected {values.shape[0]}")
        replicates.append(structure + noise)
    logger.info(
        f"Generated {cfg.replicates} bootstrap replicates (block length {cfg.block_length}, n={values.shape[0]})"
    )
    return replicates
