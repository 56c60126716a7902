"""Empirical CDFs, Kolmogorov-Smirnov distances, and the normal CDF.

All curves here are right-continuous step functions; sup-distances are
evaluated at jump points, where a step-vs-step or step-vs-continuous
supremum is attained.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class Ecdf:
    """Right-continuous empirical CDF of a finite sample."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.sort(np.asarray(self.points, dtype=np.float64))
        if pts.size == 0:
            raise ValueError("empty sample")
        if not np.all(np.isfinite(pts)):
            raise ValueError("sample values must be finite")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def size(self) -> int:
        return len(self.points)

    def __call__(self, x):
        """Fraction of sample points <= x (scalar or array)."""
        counts = np.searchsorted(self.points, x, side="right")
        return counts / self.size

    @property
    def jumps(self) -> np.ndarray:
        return np.unique(self.points)


def ecdf(sample) -> Ecdf:
    """Empirical CDF of a non-empty sample."""
    return Ecdf(points=np.asarray(sample, dtype=np.float64))


def ks_distance(a: Ecdf, b: Ecdf) -> float:
    """Two-sample sup-norm distance, evaluated at all jump points."""
    grid = np.union1d(a.jumps, b.jumps)
    return float(np.max(np.abs(a(grid) - b(grid))))


def normal_cdf(x):
    """Standard normal CDF via erfc; scalar in, scalar out (arrays allowed)."""
    if np.isscalar(x):
        return 0.5 * math.erfc(-float(x) / _SQRT2)
    arr = np.asarray(x, dtype=np.float64)
    out = np.empty(arr.shape, dtype=np.float64)
    flat_in = arr.ravel()
    flat_out = out.ravel()
    for i in range(flat_in.size):
        flat_out[i] = 0.5 * math.erfc(-flat_in[i] / _SQRT2)
    return out


def ks_to_normal(e: Ecdf) -> float:
    """One-sample sup-norm distance of an ECDF to the standard normal.

    Checks both the right limit and the left limit of the ECDF at each jump,
    since the supremum against a continuous CDF can occur just before a jump.
    """
    xs, counts = np.unique(e.points, return_counts=True)
    cum = np.cumsum(counts)
    hi = cum / e.size
    lo = (cum - counts) / e.size
    phi = normal_cdf(xs)
    return float(max(np.max(hi - phi), np.max(phi - lo)))


def normal_quantile(p: float) -> float:
    """Inverse standard normal CDF by bisection (1e-12 accuracy)."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must be in (0, 1), got {p}")
    lo, hi = -40.0, 40.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if normal_cdf(mid) < p:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-13:
            break
    return 0.5 * (lo + hi)
