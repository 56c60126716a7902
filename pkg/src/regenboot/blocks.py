"""Regeneration-block decomposition of a trajectory at an atom.

A visit to the atom regenerates the chain, so the path splits into an
initial segment B_0, complete blocks B_1..B_numreg (independent and
identically distributed), and an incomplete tail.  Conventions:

- visit_times are all t in [0, n] with X_t in the atom, t = 0 included;
- T is the visit count, numreg = max(T - 1, 0) the complete-block count;
- B_0 spans [0, t_1] (just the single state X_0 when the chain starts in
  the atom), block j spans the half-open range (t_j, t_{j+1}], and the
  tail spans (t_T, n];
- with no visit at all (T = 0) the whole path is B_0 and the tail is empty.

Only B_1..B_numreg enter estimation; B_0 and the tail are dropped.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .chains import Trajectory


@dataclass(frozen=True)
class AtomSpec:
    """Membership test for the regeneration atom.

    ``predicate`` decides membership for a single integer state.  For the
    common singleton case use :meth:`singleton`, which also enables a
    vectorized fast path.
    """

    predicate: Callable[[int], bool]
    label: str = "atom"
    value: int | None = None

    @classmethod
    def singleton(cls, value: int) -> "AtomSpec":
        """Atom consisting of the single state ``value``."""
        return cls(predicate=lambda s, v=value: s == v, label=f"{{{value}}}", value=value)

    def mask(self, states: np.ndarray) -> np.ndarray:
        """Boolean membership mask over an array of states."""
        if self.value is not None:
            return states == self.value
        return np.fromiter((bool(self.predicate(int(s))) for s in states),
                           dtype=bool, count=len(states))


ZERO_ATOM = AtomSpec.singleton(0)


@dataclass(frozen=True)
class BlockDecomposition:
    """Visit times and block boundaries of one trajectory.

    ``visit_times`` is strictly increasing; ``n`` is the trajectory horizon.
    Everything else (counts, index ranges) is derived.  The three range
    groups b0 / blocks / tail partition [0, n] exactly.
    """

    visit_times: np.ndarray
    n: int

    def __post_init__(self):
        vt = np.asarray(self.visit_times, dtype=np.int64).view()
        if vt.ndim != 1:
            raise ValueError("visit_times must be 1-d")
        if vt.size and (vt[0] < 0 or vt[-1] > self.n or np.any(np.diff(vt) <= 0)):
            raise ValueError("visit_times must be strictly increasing within [0, n]")
        vt.setflags(write=False)
        object.__setattr__(self, "visit_times", vt)

    @property
    def num_visits(self) -> int:
        """T: number of atom visits in [0, n]."""
        return len(self.visit_times)

    @property
    def numreg(self) -> int:
        """Number of complete regeneration blocks, max(T - 1, 0)."""
        return max(self.num_visits - 1, 0)

    @property
    def b0_range(self) -> slice:
        """Index range of the initial segment (whole path when T = 0)."""
        if self.num_visits == 0:
            return slice(0, self.n + 1)
        return slice(0, int(self.visit_times[0]) + 1)

    @property
    def block_ranges(self) -> list[slice]:
        """Index ranges (t_j, t_{j+1}] of the complete blocks, j = 1..numreg."""
        vt = self.visit_times
        return [slice(int(vt[j]) + 1, int(vt[j + 1]) + 1) for j in range(self.numreg)]

    @property
    def tail_range(self) -> slice:
        """Index range of the incomplete tail (t_T, n]; empty when T = 0 or t_T = n."""
        if self.num_visits == 0:
            return slice(self.n + 1, self.n + 1)
        return slice(int(self.visit_times[-1]) + 1, self.n + 1)

    @property
    def block_lengths(self) -> np.ndarray:
        """Lengths of the complete blocks: t_{j+1} - t_j."""
        return np.diff(self.visit_times)


@dataclass(frozen=True)
class BlockStatistics:
    """Per-block functional sums and lengths: all the data bootstrap needs.

    f_sums[j] is the sum of f over block j+1's states, lengths[j] its length.
    f_b0 and f_tail hold the excluded initial and tail segments so that

        f_b0 + sum(f_sums) + f_tail == partial sum of f over the path,

    exactly whenever every partial sum of the f values is exactly
    representable (integer or dyadic values), and to 1e-12 relative
    tolerance otherwise (floating-point reassociation across segments).
    """

    f_sums: np.ndarray
    lengths: np.ndarray
    f_b0: float
    f_tail: float
    n: int
    numreg: int

    def __post_init__(self):
        f_sums = np.asarray(self.f_sums, dtype=np.float64).view()
        lengths = np.asarray(self.lengths, dtype=np.int64).view()
        if f_sums.shape != lengths.shape or f_sums.ndim != 1:
            raise ValueError("f_sums and lengths must be 1-d and equally long")
        if len(f_sums) != self.numreg:
            raise ValueError(f"expected {self.numreg} block sums, got {len(f_sums)}")
        if np.any(lengths <= 0):
            raise ValueError("block lengths must be positive")
        if not np.all(np.isfinite(f_sums)):
            raise ValueError("block sums must be finite")
        f_sums.setflags(write=False)
        lengths.setflags(write=False)
        object.__setattr__(self, "f_sums", f_sums)
        object.__setattr__(self, "lengths", lengths)


@dataclass(frozen=True)
class OccupationPaths:
    """Normalized visit-count and cumulative-length step processes on a grid."""

    grid: np.ndarray
    t_path: np.ndarray
    c_path: np.ndarray


def decompose(traj: Trajectory, atom: AtomSpec) -> BlockDecomposition:
    """Locate every atom visit and fix the block boundaries.

    Pure: the same trajectory and atom always give the same decomposition.
    No visits is not an error; downstream estimators reject numreg < 2.
    """
    mask = atom.mask(traj.states)
    visit_times = np.flatnonzero(mask).astype(np.int64)
    return BlockDecomposition(visit_times=visit_times, n=traj.n)


def _apply_f(f: Callable, states: np.ndarray) -> np.ndarray:
    """Evaluate f over all states, vectorized when f supports arrays."""
    try:
        fx = np.asarray(f(states), dtype=np.float64)
        if fx.shape == states.shape:
            return fx
    except (TypeError, ValueError, ZeroDivisionError):
        pass
    return np.array([float(f(int(s))) for s in states], dtype=np.float64)


def block_functional(traj: Trajectory, decomp: BlockDecomposition,
                     f: Callable) -> BlockStatistics:
    """Sum f over each segment of the decomposition.

    ``f`` maps one integer state to a real; a vectorized implementation
    (accepting an int64 array) is used directly when available.  Sums
    accumulate left-to-right in time within each segment.
    """
    if decomp.n != traj.n:
        raise ValueError("decomposition does not match trajectory horizon")
    fx = _apply_f(f, traj.states)
    T = decomp.num_visits
    if T == 0:
        return BlockStatistics(f_sums=np.empty(0), lengths=np.empty(0, np.int64),
                               f_b0=float(np.add.reduce(fx)), f_tail=0.0,
                               n=traj.n, numreg=0)
    vt = decomp.visit_times
    # segment cut points: [0, t_1+1, ..., t_T+1); reduceat sums fx[cut[i]:cut[i+1])
    cut = np.empty(T, dtype=np.intp)
    cut[0] = 0
    cut[1:] = vt[:-1] + 1
    tail_start = int(vt[-1]) + 1
    if tail_start <= traj.n:
        sums = np.add.reduceat(fx, np.append(cut, tail_start))
        f_tail = float(sums[-1])
        sums = sums[:-1]
    else:
        sums = np.add.reduceat(fx, cut)
        f_tail = 0.0
    return BlockStatistics(f_sums=sums[1:], lengths=decomp.block_lengths,
                           f_b0=float(sums[0]), f_tail=f_tail,
                           n=traj.n, numreg=decomp.numreg)


def partial_sum(traj: Trajectory, f: Callable) -> float:
    """Sum of f over the whole path, Σ_{t=0..n} f(X_t)."""
    return float(np.add.reduce(_apply_f(f, traj.states)))


def occupation_processes(decomp: BlockDecomposition, beta: float, L_const: float,
                         grid) -> OccupationPaths:
    """Normalized occupation step processes evaluated on a grid.

    t_path(t) = T(floor(n t)) / u(n) with u(z) = z**beta * L_const;
    c_path(t) = (1/v(n)) * cumulative block length through block floor(n t),
    counting B_0, where v is the inverse of u.  The cumulative length through
    block m equals the (m+1)-th visit time, so the block index clamps to the
    last complete block (and to 0 when there are no visits); time indices
    past n clamp to n.
    """
    if not 0.0 < beta < 1.0:
        raise ValueError(f"beta must be in (0, 1), got {beta}")
    if not L_const > 0.0:
        raise ValueError(f"L_const must be positive, got {L_const}")
    grid = np.asarray(grid, dtype=np.float64)
    if grid.size == 0 or np.any(~np.isfinite(grid)) or np.any(grid <= 0.0):
        raise ValueError("grid values must be finite and positive")
    n = decomp.n
    if n == 0:
        raise ValueError("occupation processes need a positive horizon")
    vt = decomp.visit_times
    T = decomp.num_visits
    u_n = n ** beta * L_const
    v_n = (n / L_const) ** (1.0 / beta)
    m = np.minimum(np.floor(n * grid).astype(np.int64), n)
    counts = np.searchsorted(vt, m, side="right")
    t_path = counts / u_n
    if T == 0:
        c_path = np.zeros_like(grid)
    else:
        idx = np.minimum(m, T - 1)
        c_path = vt[idx] / v_n
    return OccupationPaths(grid=grid, t_path=t_path, c_path=c_path)
