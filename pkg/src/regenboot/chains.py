"""Trajectory simulation for integer-state Markov chains.

The workhorse is the simple symmetric random walk on the integers, which is
null recurrent with regeneration index beta = 1/2 at the atom {0}.  A small
``ChainModel`` hook exists for other chains; it trades speed for generality.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np


@dataclass(frozen=True)
class Trajectory:
    """A realized path X_0..X_n of an integer-state chain.

    ``states`` has length n + 1; index t holds X_t.  Immutable and safe to
    share between workers.
    """

    states: np.ndarray

    def __post_init__(self):
        states = np.asarray(self.states)
        if states.ndim != 1 or states.size < 1:
            raise ValueError("states must be a non-empty 1-d array")
        if not np.issubdtype(states.dtype, np.integer):
            raise ValueError(f"states must be integer-valued, got dtype {states.dtype}")
        states = states.astype(np.int64, copy=False).view()
        states.setflags(write=False)
        object.__setattr__(self, "states", states)

    @property
    def n(self) -> int:
        """Time horizon: number of steps taken after X_0."""
        return len(self.states) - 1


@dataclass(frozen=True)
class ChainModel:
    """A chain given by a start state and a one-step transition rule.

    ``step(state, rng)`` must be a pure function of its arguments: the same
    state and the same stream position always give the same next state.
    """

    initial_state: int
    step: Callable[[int, np.random.Generator], int]


def simulate_ssrw(n: int, rng: np.random.Generator) -> Trajectory:
    """Simple symmetric random walk from 0: X_t = sum of t fair +-1 steps.

    Deterministic given the stream state.  n = 0 returns the single-point
    path [0].
    """
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    states = np.empty(n + 1, dtype=np.int64)
    states[0] = 0
    if n > 0:
        steps = 2 * rng.integers(0, 2, size=n, dtype=np.int64) - 1
        np.cumsum(steps, out=states[1:])
    return Trajectory(states)


def simulate_chain(model: ChainModel, n: int, rng: np.random.Generator) -> Trajectory:
    """Apply ``model.step`` n times from ``model.initial_state``."""
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    states = np.empty(n + 1, dtype=np.int64)
    states[0] = model.initial_state
    x = model.initial_state
    for t in range(n):
        x = model.step(x, rng)
        states[t + 1] = x
    return Trajectory(states)


def ssrw_model() -> ChainModel:
    """The random walk as a ChainModel.

    Consumes the stream one draw per step in the same way as the vectorized
    ``simulate_ssrw``, so both entry points produce identical paths from the
    same stream.
    """

    def step(state: int, rng: np.random.Generator) -> int:
        return state + 2 * int(rng.integers(0, 2, dtype=np.int64)) - 1

    return ChainModel(initial_state=0, step=step)
