"""Block resampling: the two bootstrap schemes, quantiles, intervals.

Both schemes draw block indices i.i.d. uniform with replacement from the
complete blocks of one chain.

- "rbb" keeps drawing until the cumulative resampled length strictly
  exceeds the horizon n, then drops the final draw: the retained count
  T̃* mimics the random block count of a fresh chain.
- "rgb" draws exactly T̃ blocks, the number the original chain produced.

The replicate statistic is sqrt(count) (G* - G_n) / sigma_n with count the
retained-block count and G* the retained-block mean; sigma_n comes from the
original sample (a switch exposes the resampled-sigma variant instead).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .blocks import BlockStatistics
from .errors import DegenerateDraw, InsufficientBlocks, TooManyDegenerate, ZeroVariance
from .estimators import point_estimate, variance_estimate
from .seeding import derive_rng

RBB = "rbb"
RGB = "rgb"
METHODS = (RBB, RGB)

STUDENTIZE_ORIGINAL = "original"
STUDENTIZE_RESAMPLED = "resampled"

_MAX_CONSECUTIVE_DEGENERATE = 100
_DEGENERATE_REPLICATE_BUDGET = 0.01


def _check_method(method: str) -> None:
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}, got {method!r}")


@dataclass(frozen=True)
class BootstrapSample:
    """One resampled block-index sequence.

    ``indices`` holds all k_star draws (0-based into the block arrays).
    For "rbb" the retained blocks are the first k_star - 1 (the final draw
    pushed the cumulative length past n); for "rgb" all draws are retained.
    """

    indices: np.ndarray
    total_length: int
    k_star: int
    method: str

    def __post_init__(self):
        _check_method(self.method)
        idx = np.asarray(self.indices, dtype=np.int64).view()
        if idx.ndim != 1 or len(idx) != self.k_star:
            raise ValueError("indices must be 1-d with one entry per draw")
        idx.setflags(write=False)
        object.__setattr__(self, "indices", idx)

    @property
    def retained_count(self) -> int:
        return self.k_star - 1 if self.method == RBB else self.k_star

    @property
    def retained_indices(self) -> np.ndarray:
        return self.indices[: self.retained_count]


@dataclass(frozen=True)
class BootstrapDistribution:
    """B replicate statistics with quantile access.

    ``values`` is sorted ascending; ``statistics`` and ``t_stars`` keep the
    replicate order for serialization.  Seed provenance records how the
    replicate streams were derived.
    """

    values: np.ndarray
    num_replicates: int
    method: str
    master_seed: int
    experiment_id: str
    statistics: np.ndarray
    t_stars: np.ndarray
    degenerate_draws: int = 0
    degenerate_replicates: int = 0

    def __post_init__(self):
        _check_method(self.method)
        if len(self.values) != self.num_replicates:
            raise ValueError("values must hold one statistic per replicate")
        if np.any(np.diff(self.values) < 0):
            raise ValueError("values must be sorted ascending")


@dataclass(frozen=True)
class ConfidenceInterval:
    """An interval [lo, hi] at a given confidence level."""

    lo: float
    hi: float
    level: float

    def __post_init__(self):
        if not 0.0 < self.level < 1.0:
            raise ValueError(f"level must be in (0, 1), got {self.level}")
        if self.lo > self.hi:
            raise ValueError("interval endpoints out of order")

    @property
    def length(self) -> float:
        return self.hi - self.lo

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi


def rbb_draw(stats: BlockStatistics, n: int, rng: np.random.Generator) -> BootstrapSample:
    """Resample blocks until the cumulative length strictly exceeds n.

    The stopping count k_star is the first k with length(1..k) > n; the
    retained blocks are the first k_star - 1.  Raises DegenerateDraw when
    the very first block already exceeds n (nothing retained).
    """
    if stats.numreg < 1:
        raise InsufficientBlocks("resampling needs at least one complete block")
    lengths = stats.lengths
    numreg = stats.numreg
    pieces = []
    base = 0
    chunk = 2 * numreg + 16
    while True:
        idx = rng.integers(0, numreg, size=chunk)
        cum = base + np.cumsum(lengths[idx])
        pos = int(np.searchsorted(cum, n, side="right"))
        if pos < len(cum):
            pieces.append(idx[: pos + 1])
            total = int(cum[pos])
            break
        pieces.append(idx)
        base = int(cum[-1])
        chunk *= 2
    indices = pieces[0] if len(pieces) == 1 else np.concatenate(pieces)
    k_star = len(indices)
    if k_star == 1:
        raise DegenerateDraw(f"first resampled block (length {total}) exceeds n={n}")
    return BootstrapSample(indices=indices, total_length=total, k_star=k_star, method=RBB)


def rgb_draw(stats: BlockStatistics, rng: np.random.Generator) -> BootstrapSample:
    """Resample exactly as many blocks as the original chain completed."""
    if stats.numreg < 1:
        raise InsufficientBlocks("resampling needs at least one complete block")
    indices = rng.integers(0, stats.numreg, size=stats.numreg)
    total = int(np.sum(stats.lengths[indices]))
    return BootstrapSample(indices=indices, total_length=total,
                           k_star=stats.numreg, method=RGB)


def bootstrap_statistic(sample: BootstrapSample, stats: BlockStatistics,
                        studentize: str = STUDENTIZE_ORIGINAL) -> float:
    """Studentized deviation of the resample mean from the original mean.

    Default studentization divides by the original-sample sigma; pass
    ``studentize="resampled"`` for the variant that uses the retained
    resample's own population sigma.
    """
    if studentize not in (STUDENTIZE_ORIGINAL, STUDENTIZE_RESAMPLED):
        raise ValueError(f"unknown studentize mode {studentize!r}")
    count = sample.retained_count
    if count < 1:
        raise DegenerateDraw("no retained blocks in sample")
    g_n = point_estimate(stats)
    sigma_n = math.sqrt(variance_estimate(stats))
    resampled = stats.f_sums[sample.retained_indices]
    num = float(np.mean(resampled)) - g_n
    if num == 0.0:
        return 0.0
    if studentize == STUDENTIZE_RESAMPLED:
        sigma = float(np.sqrt(np.mean((resampled - np.mean(resampled)) ** 2)))
    else:
        sigma = sigma_n
    if sigma == 0.0:
        raise ZeroVariance("zero studentization scale")
    return math.sqrt(count) * num / sigma


def bootstrap_distribution(stats: BlockStatistics, n: int, B: int, method: str,
                           master_seed: int, experiment_id: str = "boot",
                           studentize: str = STUDENTIZE_ORIGINAL) -> BootstrapDistribution:
    """B independent replicates of the bootstrap statistic, sorted.

    Replicate r draws from the stream derived from (master_seed,
    experiment_id, r), so the result is independent of execution order and
    identical across worker layouts.  Degenerate draws (rbb only) are
    redrawn from the same replicate stream and counted; more than 100
    consecutive failures in one replicate, or redraws touching more than 1%
    of replicates, abort with TooManyDegenerate.
    """
    if B < 1:
        raise ValueError(f"B must be at least 1, got {B}")
    _check_method(method)
    if studentize not in (STUDENTIZE_ORIGINAL, STUDENTIZE_RESAMPLED):
        raise ValueError(f"unknown studentize mode {studentize!r}")
    g_n = point_estimate(stats)
    sigma_n = math.sqrt(variance_estimate(stats))
    f_sums = stats.f_sums
    resampled_scale = studentize == STUDENTIZE_RESAMPLED
    statistics = np.empty(B, dtype=np.float64)
    t_stars = np.empty(B, dtype=np.int64)
    degenerate_draws = 0
    degenerate_replicates = 0
    for r in range(B):
        rng = derive_rng(master_seed, experiment_id, r)
        failures = 0
        while True:
            try:
                if method == RBB:
                    sample = rbb_draw(stats, n, rng)
                else:
                    sample = rgb_draw(stats, rng)
                break
            except DegenerateDraw:
                failures += 1
                degenerate_draws += 1
                if failures >= _MAX_CONSECUTIVE_DEGENERATE:
                    raise TooManyDegenerate(
                        f"replicate {r}: {failures} consecutive degenerate draws")
        if failures:
            degenerate_replicates += 1
        resampled = f_sums[sample.retained_indices]
        num = float(np.mean(resampled)) - g_n
        if num == 0.0:
            val = 0.0
        else:
            if resampled_scale:
                sigma = float(np.sqrt(np.mean((resampled - np.mean(resampled)) ** 2)))
            else:
                sigma = sigma_n
            if sigma == 0.0:
                raise ZeroVariance(f"replicate {r}: zero studentization scale")
            val = math.sqrt(sample.retained_count) * num / sigma
        statistics[r] = val
        t_stars[r] = sample.retained_count
    if degenerate_replicates > _DEGENERATE_REPLICATE_BUDGET * B:
        raise TooManyDegenerate(
            f"{degenerate_replicates} of {B} replicates needed degenerate redraws")
    return BootstrapDistribution(values=np.sort(statistics), num_replicates=B,
                                 method=method, master_seed=master_seed,
                                 experiment_id=experiment_id,
                                 statistics=statistics, t_stars=t_stars,
                                 degenerate_draws=degenerate_draws,
                                 degenerate_replicates=degenerate_replicates)


def quantile(dist: BootstrapDistribution, p: float) -> float:
    """Order-statistic quantile: sorted values at 1-based index ceil(p B)."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must be in (0, 1), got {p}")
    k = math.ceil(p * dist.num_replicates)
    return float(dist.values[k - 1])


def confidence_interval(g_n: float, sigma_hat: float, numreg: int,
                        dist: BootstrapDistribution, level: float) -> ConfidenceInterval:
    """Bootstrap interval from the replicate quantiles.

    With alpha = 1 - level the interval is

        [G_n - (sigma/sqrt(T̃)) q(1 - alpha/2),  G_n - (sigma/sqrt(T̃)) q(alpha/2)]

    (the upper endpoint uses the lower quantile: the statistic's deviation
    is subtracted from the estimate).
    """
    if not 0.0 < level < 1.0:
        raise ValueError(f"level must be in (0, 1), got {level}")
    if numreg < 1:
        raise InsufficientBlocks("interval needs at least one block")
    if sigma_hat < 0:
        raise ValueError("sigma_hat must be non-negative")
    alpha = 1.0 - level
    scale = sigma_hat / math.sqrt(numreg)
    lo = g_n - scale * quantile(dist, 1.0 - alpha / 2.0)
    hi = g_n - scale * quantile(dist, alpha / 2.0)
    return ConfidenceInterval(lo=lo, hi=hi, level=level)
