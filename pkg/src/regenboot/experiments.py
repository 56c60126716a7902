"""The simulation studies: true sampling law, ECDF comparison, coverage,
and the visit-count moment diagnostic.

Every experiment fans out over independent chains.  Chain i of an
experiment uses the stream derived from (master_seed, scope, i), where the
scope string identifies the experiment and its parameters, e.g.
"coverage:n=1000:chain".  Results are merged in chain order, so output is
identical for any worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .blocks import ZERO_ATOM, BlockStatistics, block_functional, decompose
from .bootstrap import (METHODS, RBB, RGB, STUDENTIZE_ORIGINAL, bootstrap_distribution,
                        confidence_interval)
from .chains import simulate_ssrw
from .empirical import ecdf, ks_distance, ks_to_normal, normal_cdf, normal_quantile
from .errors import InsufficientBlocks
from .estimators import normalized_visit_count, point_estimate, variance_estimate
from .seeding import derive_rng

NORMAL = "normal"


def inv_square(states):
    """The study functional f(k) = 1/k² with f(0) = 0."""
    if np.isscalar(states):
        k = float(states)
        return 0.0 if k == 0.0 else 1.0 / (k * k)
    arr = np.asarray(states, dtype=np.float64)
    out = np.zeros(arr.shape, dtype=np.float64)
    nz = arr != 0.0
    out[nz] = 1.0 / (arr[nz] * arr[nz])
    return out


INV_SQUARE_TARGET = math.pi ** 2 / 3.0

FUNCTIONALS = {"inv_square": inv_square}
TARGETS = {"inv_square": INV_SQUARE_TARGET}


def chain_statistics(n: int, master_seed: int, experiment_id: str, replicate: int,
                     f_name: str = "inv_square") -> BlockStatistics:
    """Simulate one chain on its derived stream and summarize its blocks."""
    f = FUNCTIONALS[f_name]
    rng = derive_rng(master_seed, experiment_id, replicate)
    traj = simulate_ssrw(n, rng)
    return block_functional(traj, decompose(traj, ZERO_ATOM), f)


# ---------------------------------------------------------------------------
# worker-pool plumbing


def _ranges(total: int, parts: int) -> list[tuple[int, int]]:
    parts = max(1, min(parts, total))
    size, rem = divmod(total, parts)
    out = []
    start = 0
    for i in range(parts):
        stop = start + size + (1 if i < rem else 0)
        out.append((start, stop))
        start = stop
    return out


def _map_ranges(task, common: tuple, total: int, workers: int) -> list:
    """Apply ``task((common, start, stop))`` over a partition of range(total).

    Results come back concatenated in index order whatever the worker
    count; each task depends only on its indices, never on the layout.
    """
    if total == 0:
        return []
    if workers <= 1:
        return [task((common, start, stop)) for start, stop in _ranges(total, 1)]
    tasks = [(common, start, stop) for start, stop in _ranges(total, workers * 4)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(task, tasks))


# ---------------------------------------------------------------------------
# true sampling distribution of the studentized statistic


@dataclass(frozen=True)
class TrueDistribution:
    """Monte Carlo sample of the studentized statistic over fresh chains."""

    values: np.ndarray
    visit_counts: np.ndarray
    n: int
    reps: int
    discarded: int
    scope: str


def _ln_task(args):
    (n, master_seed, scope, theta, f_name), start, stop = args
    f = FUNCTIONALS[f_name]
    values = np.full(stop - start, np.nan)
    counts = np.zeros(stop - start, dtype=np.int64)
    for i in range(start, stop):
        rng = derive_rng(master_seed, scope, i)
        traj = simulate_ssrw(n, rng)
        dec = decompose(traj, ZERO_ATOM)
        counts[i - start] = dec.num_visits
        if dec.numreg < 2:
            continue
        stats = block_functional(traj, dec, f)
        sigma2 = variance_estimate(stats)
        if sigma2 == 0.0:
            continue
        g = point_estimate(stats)
        values[i - start] = math.sqrt(stats.numreg) * (g - theta) / math.sqrt(sigma2)
    return values, counts


def true_distribution_mc(n: int, reps: int, master_seed: int, *,
                         theta: float = INV_SQUARE_TARGET, f_name: str = "inv_square",
                         workers: int = 1) -> TrueDistribution:
    """Studentized statistics of ``reps`` independent chains of length n.

    Chains with fewer than two complete blocks (or zero block variance)
    carry no statistic; they are dropped and counted in ``discarded``.
    """
    if reps < 1:
        raise ValueError(f"reps must be positive, got {reps}")
    scope = f"true:n={n}:chain"
    parts = _map_ranges(_ln_task, (n, master_seed, scope, theta, f_name), reps, workers)
    values = np.concatenate([p[0] for p in parts])
    counts = np.concatenate([p[1] for p in parts])
    keep = ~np.isnan(values)
    return TrueDistribution(values=values[keep], visit_counts=counts[keep],
                            n=n, reps=reps, discarded=int(np.sum(~keep)), scope=scope)


# ---------------------------------------------------------------------------
# ECDF comparison on one anchor chain


@dataclass(frozen=True)
class EcdfTable:
    """The four distribution curves on a common grid, with KS distances."""

    x: np.ndarray
    f_true: np.ndarray
    f_rbb: np.ndarray
    f_rgb: np.ndarray
    f_normal: np.ndarray
    ks: dict[str, float]
    n: int
    boot_reps: int
    true_reps: int
    discarded: int
    degenerate_draws: dict[str, int]
    scopes: dict[str, str] = field(default_factory=dict)


def _comparison_grid(samples: list[np.ndarray], max_points: int = 2000) -> np.ndarray:
    """Merged jump points of all samples, thinned evenly to max_points."""
    merged = np.unique(np.concatenate(samples))
    if len(merged) <= max_points:
        return merged
    idx = np.unique(np.round(np.linspace(0, len(merged) - 1, max_points)).astype(np.intp))
    return merged[idx]


def cdf_comparison(n: int, B: int, true_reps: int, master_seed: int, *,
                   workers: int = 1, anchor_replicate: int = 0,
                   theta: float = INV_SQUARE_TARGET, f_name: str = "inv_square",
                   studentize: str = STUDENTIZE_ORIGINAL) -> EcdfTable:
    """Bootstrap ECDFs of one anchor chain against the true law and the normal.

    The anchor chain is simulated on its own derived stream; each bootstrap
    method produces B replicate statistics; the true law comes from
    ``true_reps`` independent chains.  All four curves are sampled on the
    merged jump grid (at most 2000 points).
    """
    if B < 1 or true_reps < 1:
        raise ValueError("B and true_reps must be positive")
    anchor_scope = f"ecdf:n={n}:anchor"
    stats = chain_statistics(n, master_seed, anchor_scope, anchor_replicate, f_name)
    if stats.numreg < 2:
        raise InsufficientBlocks(
            f"anchor chain has {stats.numreg} complete blocks; need at least 2")
    boot_scopes = {m: f"ecdf:n={n}:anchor={anchor_replicate}:boot:{m}" for m in METHODS}
    dists = {m: bootstrap_distribution(stats, n, B, m, master_seed, boot_scopes[m],
                                       studentize=studentize) for m in METHODS}
    true = true_distribution_mc(n, true_reps, master_seed, theta=theta,
                                f_name=f_name, workers=workers)
    e_true = ecdf(true.values)
    e_rbb = ecdf(dists[RBB].values)
    e_rgb = ecdf(dists[RGB].values)
    grid = _comparison_grid([e_true.points, e_rbb.points, e_rgb.points])
    ks = {
        "rbb_vs_true": ks_distance(e_rbb, e_true),
        "rgb_vs_true": ks_distance(e_rgb, e_true),
        "rbb_vs_normal": ks_to_normal(e_rbb),
        "rgb_vs_normal": ks_to_normal(e_rgb),
    }
    scopes = {"anchor": anchor_scope, "true": true.scope, **boot_scopes}
    return EcdfTable(x=grid, f_true=e_true(grid), f_rbb=e_rbb(grid), f_rgb=e_rgb(grid),
                     f_normal=normal_cdf(grid), ks=ks, n=n, boot_reps=B,
                     true_reps=true_reps, discarded=true.discarded,
                     degenerate_draws={m: dists[m].degenerate_draws for m in METHODS},
                     scopes=scopes)


# ---------------------------------------------------------------------------
# coverage study


@dataclass(frozen=True)
class CoverageRow:
    n: int
    method: str
    level: float
    chains: int
    coverage: float
    avg_length: float
    excluded: int
    degenerate_draws: int


@dataclass(frozen=True)
class CoverageReport:
    rows: list[CoverageRow]
    level: float
    requested_chains: int
    boot_reps: int
    scopes: dict[str, str] = field(default_factory=dict)


def _coverage_task(args):
    (n, master_seed, B, level, methods, include_normal, theta, f_name,
     studentize, z), start, stop = args
    chain_scope = f"coverage:n={n}:chain"
    out = []
    for i in range(start, stop):
        stats = chain_statistics(n, master_seed, chain_scope, i, f_name)
        if stats.numreg < 2:
            out.append(None)
            continue
        sigma2 = variance_estimate(stats)
        if sigma2 == 0.0:
            out.append(None)
            continue
        g = point_estimate(stats)
        sigma = math.sqrt(sigma2)
        rec = {}
        for m in methods:
            dist = bootstrap_distribution(
                stats, n, B, m, master_seed,
                f"coverage:n={n}:chain={i}:boot:{m}", studentize=studentize)
            ci = confidence_interval(g, sigma, stats.numreg, dist, level)
            rec[m] = (ci.contains(theta), ci.length, dist.degenerate_draws)
        if include_normal:
            half = z * sigma / math.sqrt(stats.numreg)
            rec[NORMAL] = (g - half <= theta <= g + half, 2.0 * half, 0)
        out.append(rec)
    return out


def coverage_experiment(n_list, chains: int, B: int, level: float, master_seed: int, *,
                        workers: int = 1, methods=METHODS, include_normal: bool = True,
                        theta: float = INV_SQUARE_TARGET, f_name: str = "inv_square",
                        studentize: str = STUDENTIZE_ORIGINAL) -> CoverageReport:
    """Empirical interval coverage and length on a grid of horizons.

    All methods see the same chains (paired design).  Chains with fewer
    than two complete blocks are excluded from the denominators and
    reported in the ``excluded`` column.
    """
    n_list = [int(n) for n in n_list]
    if not n_list or any(n < 1 for n in n_list):
        raise ValueError("n_list must hold positive horizons")
    if chains < 1 or B < 1:
        raise ValueError("chains and B must be positive")
    if not 0.0 < level < 1.0:
        raise ValueError(f"level must be in (0, 1), got {level}")
    methods = tuple(methods)
    for m in methods:
        if m not in METHODS:
            raise ValueError(f"unknown method {m!r}")
    z = normal_quantile(0.5 + level / 2.0)
    series = list(methods) + ([NORMAL] if include_normal else [])
    rows = []
    scopes = {}
    for n in n_list:
        common = (n, master_seed, B, level, methods, include_normal, theta,
                  f_name, studentize, z)
        parts = _map_ranges(_coverage_task, common, chains, workers)
        records = [rec for part in parts for rec in part]
        excluded = sum(1 for rec in records if rec is None)
        included = [rec for rec in records if rec is not None]
        scopes[f"chains:n={n}"] = f"coverage:n={n}:chain"
        for m in methods:
            scopes[f"boot:n={n}:{m}"] = f"coverage:n={n}:chain={{i}}:boot:{m}"
        for m in series:
            hits = sum(1 for rec in included if rec[m][0])
            total_len = math.fsum(rec[m][1] for rec in included)
            degen = sum(rec[m][2] for rec in included)
            count = len(included)
            rows.append(CoverageRow(
                n=n, method=m, level=level, chains=count,
                coverage=hits / count if count else float("nan"),
                avg_length=total_len / count if count else float("nan"),
                excluded=excluded, degenerate_draws=degen))
    return CoverageReport(rows=rows, level=level, requested_chains=chains,
                          boot_reps=B, scopes=scopes)


# ---------------------------------------------------------------------------
# visit-count moment diagnostic


@dataclass(frozen=True)
class MomentRow:
    m: int
    empirical: float
    theoretical: float
    std_err: float


@dataclass(frozen=True)
class MomentTable:
    rows: list[MomentRow]
    n: int
    reps: int
    beta: float
    L_const: float
    scope: str


def ml_moment(m: int, beta: float) -> float:
    """m-th moment of the limiting law of the normalized visit count."""
    return math.factorial(m) / math.gamma(1.0 + m * beta)


def _visit_task(args):
    (n, master_seed, scope, beta, L_const), start, stop = args
    out = np.empty(stop - start, dtype=np.float64)
    for i in range(start, stop):
        rng = derive_rng(master_seed, scope, i)
        traj = simulate_ssrw(n, rng)
        dec = decompose(traj, ZERO_ATOM)
        out[i - start] = normalized_visit_count(dec, beta, L_const)
    return out


def ml_moment_diagnostic(n: int, reps: int, max_moment: int, beta: float,
                         L_const: float, master_seed: int, *,
                         workers: int = 1) -> MomentTable:
    """Empirical vs theoretical moments of the normalized visit count.

    The limit law's m-th moment is m!/Gamma(1 + m beta); the table carries
    the Monte Carlo standard error of each empirical moment.
    """
    if not 0 <= max_moment <= 4:
        raise ValueError(f"max_moment must be in 0..4, got {max_moment}")
    if reps < 2:
        raise ValueError(f"reps must be at least 2, got {reps}")
    if not 0.0 < beta < 1.0:
        raise ValueError(f"beta must be in (0, 1), got {beta}")
    if not L_const > 0.0:
        raise ValueError(f"L_const must be positive, got {L_const}")
    scope = f"mlmom:n={n}:chain"
    parts = _map_ranges(_visit_task, (n, master_seed, scope, beta, L_const),
                        reps, workers)
    sample = np.concatenate(parts)
    rows = []
    for m in range(max_moment + 1):
        powered = sample ** m
        emp = float(np.mean(powered))
        se = 0.0 if m == 0 else float(np.std(powered, ddof=1) / math.sqrt(reps))
        rows.append(MomentRow(m=m, empirical=emp, theoretical=ml_moment(m, beta),
                              std_err=se))
    return MomentTable(rows=rows, n=n, reps=reps, beta=beta, L_const=L_const,
                       scope=scope)
