"""Quick self-contained invariant checks, runnable from the CLI.

Each check prints one PASS/FAIL line.  The suite covers the structural
invariants that do not need long Monte Carlo runs: partition and
reconstruction of block ranges, the split-sum identity, resampling
stopping rules, quantile and interval arithmetic, stream derivation, and
the empirical-CDF helpers.
"""

from __future__ import annotations

import math

import numpy as np

from .blocks import AtomSpec, BlockStatistics, ZERO_ATOM, block_functional, decompose, partial_sum
from .bootstrap import (BootstrapDistribution, RBB, confidence_interval, quantile,
                        rbb_draw, rgb_draw)
from .chains import Trajectory, simulate_ssrw
from .empirical import ecdf, ks_distance, normal_cdf
from .errors import DegenerateDraw
from .experiments import inv_square
from .seeding import derive_key, derive_rng


def _random_cases(master_seed, count, scope):
    for i in range(count):
        rng = derive_rng(master_seed, scope, i)
        n = int(rng.integers(0, 400))
        traj = simulate_ssrw(n, rng)
        atom = ZERO_ATOM if i % 2 == 0 else AtomSpec.singleton(int(rng.integers(-2, 3)))
        yield traj, atom


def check_partition(master_seed) -> tuple[bool, str]:
    for traj, atom in _random_cases(master_seed, 100, "selftest:partition"):
        dec = decompose(traj, atom)
        pieces = [traj.states[dec.b0_range]]
        pieces += [traj.states[r] for r in dec.block_ranges]
        pieces.append(traj.states[dec.tail_range])
        rebuilt = np.concatenate(pieces)
        if len(rebuilt) != traj.n + 1 or not np.array_equal(rebuilt, traj.states):
            return False, f"reconstruction failed at n={traj.n}, atom={atom.label}"
    return True, "100 random trajectories reconstruct exactly"


def check_split_sum(master_seed) -> tuple[bool, str]:
    def dyadic(states):
        return np.asarray(states, dtype=np.float64) / 8.0 + 3.0

    for traj, atom in _random_cases(master_seed, 100, "selftest:splitsum"):
        dec = decompose(traj, atom)
        st = block_functional(traj, dec, dyadic)
        split = st.f_b0 + math.fsum(st.f_sums) + st.f_tail
        if split != partial_sum(traj, dyadic):
            return False, f"exact identity failed at n={traj.n}"
        st = block_functional(traj, dec, inv_square)
        split = st.f_b0 + math.fsum(st.f_sums) + st.f_tail
        whole = partial_sum(traj, inv_square)
        if abs(split - whole) > 1e-12 * max(1.0, abs(whole)):
            return False, f"1e-12 identity failed at n={traj.n}"
    return True, "exact for dyadic values, 1e-12 for 1/k^2"


def check_length_duality(master_seed) -> tuple[bool, str]:
    for traj, atom in _random_cases(master_seed, 50, "selftest:duality"):
        dec = decompose(traj, atom)
        st = block_functional(traj, dec, lambda s: np.ones_like(np.asarray(s), dtype=np.float64))
        if not np.array_equal(st.f_sums.astype(np.int64), st.lengths):
            return False, f"f=1 does not recover lengths at n={traj.n}"
    return True, "constant-one functional recovers block lengths"


def check_rbb_stopping(master_seed) -> tuple[bool, str]:
    rng = derive_rng(master_seed, "selftest:rbb", 0)
    stats = BlockStatistics(f_sums=np.array([0.5, 1.0, 2.0, 0.25]),
                            lengths=np.array([1, 3, 2, 5]), f_b0=0.0, f_tail=0.0,
                            n=12, numreg=4)
    for _ in range(500):
        try:
            s = rbb_draw(stats, 12, rng)
        except DegenerateDraw:
            continue
        cum = np.cumsum(stats.lengths[s.indices])
        if not (cum[-1] > 12 and (s.k_star == 1 or cum[-2] <= 12)):
            return False, f"stopping rule violated: cum={cum.tolist()}"
        if s.total_length != int(cum[-1]):
            return False, "total_length mismatch"
    return True, "500 draws satisfy len(1..k*-1) <= n < len(1..k*)"


def check_rgb_count(master_seed) -> tuple[bool, str]:
    rng = derive_rng(master_seed, "selftest:rgb", 0)
    stats = BlockStatistics(f_sums=np.array([1.0, 2.0, 3.0]),
                            lengths=np.array([2, 2, 2]), f_b0=0.0, f_tail=0.0,
                            n=6, numreg=3)
    for _ in range(200):
        s = rgb_draw(stats, rng)
        if s.k_star != 3 or s.retained_count != 3:
            return False, "draw count != numreg"
        if not np.all((s.indices >= 0) & (s.indices < 3)):
            return False, "index out of range"
    return True, "200 draws all have exactly numreg indices"


def _dist(values):
    arr = np.asarray(values, dtype=np.float64)
    return BootstrapDistribution(values=np.sort(arr), num_replicates=len(arr),
                                 method=RBB, master_seed=0, experiment_id="selftest",
                                 statistics=arr, t_stars=np.ones(len(arr), dtype=np.int64))


def check_quantile(master_seed) -> tuple[bool, str]:
    rng = derive_rng(master_seed, "selftest:quantile", 0)
    for _ in range(200):
        b = int(rng.integers(1, 50))
        vals = rng.standard_normal(b)
        d = _dist(vals)
        p = float(rng.uniform(0.01, 0.99))
        want = sorted(float(v) for v in vals)[math.ceil(p * b) - 1]
        if quantile(d, p) != want:
            return False, f"quantile mismatch at B={b}, p={p}"
    if quantile(_dist([1.0, 2.0, 3.0, 4.0]), 0.5) != 2.0:
        return False, "median of [1,2,3,4] is not 2"
    return True, "matches full-sort order statistic on 200 random cases"


def check_interval(master_seed) -> tuple[bool, str]:
    d = _dist([-2.0, -1.0, 1.0, 2.0])
    ci = confidence_interval(1.0, 1.0, 4, d, 0.95)
    if not (ci.lo == 0.0 and ci.hi == 2.0):
        return False, f"expected [0, 2], got [{ci.lo}, {ci.hi}]"
    rng = derive_rng(master_seed, "selftest:interval", 0)
    for _ in range(100):
        d = _dist(rng.standard_normal(200))
        ci = confidence_interval(float(rng.uniform(-5, 5)), float(rng.uniform(0, 3)),
                                 int(rng.integers(1, 50)), d, float(rng.uniform(0.5, 0.99)))
        if ci.lo > ci.hi:
            return False, "endpoints out of order"
    return True, "arithmetic example and 100 random intervals ordered"


def check_seeding(master_seed) -> tuple[bool, str]:
    k1 = derive_key(12345, "demo", 0)
    k2 = derive_key(12345, "demo", 0)
    if not np.array_equal(k1, k2):
        return False, "derivation not deterministic"
    if np.array_equal(k1, derive_key(12345, "demo", 1)):
        return False, "distinct replicates collide"
    if np.array_equal(k1, derive_key(12346, "demo", 0)):
        return False, "distinct master seeds collide"
    a = derive_rng(master_seed, "selftest:seed", 7).integers(0, 1 << 30, size=4)
    b = derive_rng(master_seed, "selftest:seed", 7).integers(0, 1 << 30, size=4)
    if not np.array_equal(a, b):
        return False, "derived stream not reproducible"
    return True, "derivation deterministic, replicate-distinct, reproducible"


def check_empirical(master_seed) -> tuple[bool, str]:
    e = ecdf([1.0, 2.0, 3.0])
    if e(2.0) != 2.0 / 3.0 or e(0.5) != 0.0 or e(3.0) != 1.0:
        return False, "ecdf evaluation wrong"
    if ks_distance(e, e) != 0.0:
        return False, "identical samples have nonzero distance"
    if ks_distance(ecdf([0.0]), ecdf([1.0])) != 1.0:
        return False, "[0] vs [1] should be distance 1"
    if normal_cdf(0.0) != 0.5:
        return False, "normal cdf at 0"
    if abs(normal_cdf(1.959964) - 0.975) > 1e-6:
        return False, "normal cdf at 1.959964"
    if abs(normal_cdf(-1.3) - (1.0 - normal_cdf(1.3))) > 1e-12:
        return False, "normal cdf symmetry"
    return True, "ecdf, KS, and normal CDF sanity checks hold"


CHECKS = [
    ("partition-reconstruction", check_partition),
    ("split-sum-identity", check_split_sum),
    ("length-duality", check_length_duality),
    ("rbb-stopping-rule", check_rbb_stopping),
    ("rgb-draw-count", check_rgb_count),
    ("quantile-order-statistic", check_quantile),
    ("confidence-interval", check_interval),
    ("stream-derivation", check_seeding),
    ("empirical-cdf", check_empirical),
]


def run_selftest(master_seed: int = 12345, out=print) -> bool:
    """Run every check; print one line each; True when all pass."""
    all_ok = True
    for name, fn in CHECKS:
        try:
            ok, detail = fn(master_seed)
        except Exception as e:  # a crashed check is a failed check
            ok, detail = False, f"raised {type(e).__name__}: {e}"
        all_ok &= ok
        out(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
    return all_ok
