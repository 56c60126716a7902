"""Command-line entry point.

Subcommands: simulate, bootstrap, ecdf-compare, coverage, ml-moments,
selftest.  Every subcommand accepts the same flag set; values resolve as
built-in defaults < --config file < explicit flags.  Exit codes: 0 success,
1 runtime failure, 2 invalid arguments.

All output files land in --out-dir together with a manifest.json recording
the config snapshot, derived-seed scopes, and content hashes.  Each data
command also renders a quick-look PNG next to its CSV (config key
``figures`` turns this off).  Data files and images carry no timestamps,
so reruns with the same config and seed are byte-identical regardless of
--workers.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .blocks import ZERO_ATOM, block_functional, decompose
from .bootstrap import bootstrap_distribution
from .chains import simulate_ssrw
from .config import ExperimentConfig, METHOD_CHOICES, load_config
from .errors import RegenBootError
from .experiments import (FUNCTIONALS, TARGETS, cdf_comparison, chain_statistics,
                          coverage_experiment, ml_moment_diagnostic)
from .seeding import derive_rng
from .selftest import run_selftest
from .tables import RunManifest, write_csv, write_manifest

WORKERS_ENV = "REGEN_BOOT_WORKERS"


def _add_common_flags(sp: argparse.ArgumentParser, n_is_list: bool) -> None:
    if n_is_list:
        sp.add_argument("--n", type=int, nargs="+", default=None, metavar="N",
                        help="horizon grid (one or more chain lengths)")
    else:
        sp.add_argument("--n", type=int, default=None, metavar="N",
                        help="chain length (number of steps)")
    sp.add_argument("--chains", type=int, default=None,
                    help="independent chain count (replicates of the experiment)")
    sp.add_argument("--boot-reps", type=int, default=None, dest="boot_reps",
                    help="bootstrap replicates per chain")
    sp.add_argument("--level", type=float, default=None,
                    help="confidence level in (0, 1)")
    sp.add_argument("--seed", type=int, default=None, dest="master_seed",
                    help="master seed (all streams derive from it)")
    sp.add_argument("--method", choices=METHOD_CHOICES, default=None,
                    help="bootstrap method(s) to run")
    sp.add_argument("--workers", type=int, default=None,
                    help=f"worker processes (fallback: ${WORKERS_ENV})")
    sp.add_argument("--out-dir", default=None, dest="out_dir",
                    help="output directory (default: current directory)")
    sp.add_argument("--config", default=None, dest="config_path", metavar="JSON",
                    help="JSON config file; explicit flags override it")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="regenboot",
        description="Regenerative-block bootstrap experiments on the symmetric random walk.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    specs = [
        ("simulate", "simulate one chain; dump trajectory, block, and visit CSVs", False),
        ("bootstrap", "bootstrap one chain; dump the replicate statistics", False),
        ("ecdf-compare", "bootstrap ECDFs of one anchor chain vs the true law "
                         "(--chains sets the true-law replicate count)", False),
        ("coverage", "interval coverage and length over a horizon grid", True),
        ("ml-moments", "visit-count moment diagnostic (--chains sets the replicate count)",
         False),
        ("selftest", "run the invariant suite and exit nonzero on failure", False),
    ]
    for name, help_text, n_is_list in specs:
        sp = sub.add_parser(name, help=help_text, description=help_text)
        _add_common_flags(sp, n_is_list)
    return p


def _resolve_config(args: argparse.Namespace) -> ExperimentConfig:
    cfg = load_config(args.config_path) if args.config_path else ExperimentConfig()
    overrides = {}
    for name in ("chains", "boot_reps", "level", "master_seed", "method", "workers"):
        value = getattr(args, name, None)
        if value is not None:
            overrides[name] = value
    n = getattr(args, "n", None)
    if n is not None:
        if isinstance(n, list):
            overrides["n_list"] = n
            overrides["n"] = n[0]
        else:
            overrides["n"] = n
    if getattr(args, "workers", None) is None and "workers" not in overrides:
        env = os.environ.get(WORKERS_ENV)
        if env is not None:
            try:
                overrides["workers"] = int(env)
            except ValueError:
                raise RegenBootError(f"${WORKERS_ENV} must be an integer, got {env!r}")
    return replace(cfg, **overrides).validate()


def _figures(cfg: ExperimentConfig):
    """The rendering module when figures are enabled, else None.

    Imported lazily so matplotlib only loads when an image is wanted.
    """
    if not cfg.figures:
        return None
    from . import figures
    return figures


def _new_manifest(cfg: ExperimentConfig, experiment: str) -> RunManifest:
    return RunManifest(master_seed=cfg.master_seed, experiment=experiment,
                       config=cfg.to_dict(), tool_version=__version__,
                       started_at=datetime.now(timezone.utc).isoformat())


def _finish(manifest: RunManifest, out_dir: Path, paths: list[Path]) -> None:
    for path in paths:
        manifest.add_output(path)
    manifest.finished_at = datetime.now(timezone.utc).isoformat()
    write_manifest(out_dir / "manifest.json", manifest)


def cmd_simulate(cfg: ExperimentConfig, out_dir: Path) -> int:
    f = FUNCTIONALS[cfg.f]
    scope = "simulate:chain"
    rng = derive_rng(cfg.master_seed, scope, 0)
    traj = simulate_ssrw(cfg.n, rng)
    dec = decompose(traj, ZERO_ATOM)
    stats = block_functional(traj, dec, f)
    manifest = _new_manifest(cfg, "simulate")
    manifest.seed_scopes = {"chain": scope}
    traj_csv = out_dir / "trajectory.csv"
    blocks_csv = out_dir / "blocks.csv"
    regens_csv = out_dir / "regens.csv"
    write_csv(traj_csv, ["t", "x"],
              ((t, int(x)) for t, x in enumerate(traj.states)))
    write_csv(blocks_csv, ["j", "length", "f_sum"],
              ((j + 1, int(stats.lengths[j]), float(stats.f_sums[j]))
               for j in range(stats.numreg)))
    write_csv(regens_csv, ["j", "tau"],
              ((j + 1, int(tau)) for j, tau in enumerate(dec.visit_times)))
    manifest.extra = {"num_visits": dec.num_visits, "numreg": dec.numreg}
    paths = [traj_csv, blocks_csv, regens_csv]
    fig = _figures(cfg)
    if fig:
        paths.append(fig.render_trajectory(traj.states, dec.visit_times, dec.numreg,
                                           out_dir / "trajectory.png"))
    _finish(manifest, out_dir, paths)
    return 0


def cmd_bootstrap(cfg: ExperimentConfig, out_dir: Path) -> int:
    chain_scope = "bootstrap:chain"
    stats = chain_statistics(cfg.n, cfg.master_seed, chain_scope, 0, cfg.f)
    manifest = _new_manifest(cfg, "bootstrap")
    manifest.seed_scopes = {"chain": chain_scope}
    rows = []
    degenerate = {}
    by_method = {}
    for m in cfg.methods:
        scope = f"bootstrap:boot:{m}"
        manifest.seed_scopes[m] = scope
        dist = bootstrap_distribution(stats, cfg.n, cfg.boot_reps, m,
                                      cfg.master_seed, scope, studentize=cfg.studentize)
        degenerate[m] = dist.degenerate_draws
        by_method[m] = dist.statistics
        for r in range(dist.num_replicates):
            rows.append((r, m, float(dist.statistics[r]), int(dist.t_stars[r])))
    path = out_dir / "bootstrap.csv"
    write_csv(path, ["replicate", "method", "statistic", "t_star"], rows)
    manifest.extra = {"numreg": stats.numreg, "degenerate_draws": degenerate}
    paths = [path]
    fig = _figures(cfg)
    if fig:
        paths.append(fig.render_bootstrap(by_method, out_dir / "bootstrap.png"))
    _finish(manifest, out_dir, paths)
    return 0


def cmd_ecdf_compare(cfg: ExperimentConfig, out_dir: Path) -> int:
    table = cdf_comparison(cfg.n, cfg.boot_reps, cfg.chains, cfg.master_seed,
                           workers=cfg.workers, theta=TARGETS[cfg.f], f_name=cfg.f,
                           studentize=cfg.studentize)
    manifest = _new_manifest(cfg, "ecdf-compare")
    manifest.seed_scopes = table.scopes
    path = out_dir / "ecdf_compare.csv"
    write_csv(path, ["x", "F_true", "F_rbb", "F_rgb", "F_normal"],
              zip(table.x, table.f_true, table.f_rbb, table.f_rgb, table.f_normal))
    manifest.extra = {"ks": table.ks, "discarded": table.discarded,
                      "degenerate_draws": table.degenerate_draws}
    paths = [path]
    fig = _figures(cfg)
    if fig:
        paths.append(fig.render_ecdf_table(table, out_dir / "ecdf_compare.png"))
    _finish(manifest, out_dir, paths)
    return 0


def cmd_coverage(cfg: ExperimentConfig, out_dir: Path) -> int:
    report = coverage_experiment(cfg.n_list, cfg.chains, cfg.boot_reps, cfg.level,
                                 cfg.master_seed, workers=cfg.workers,
                                 methods=cfg.methods, include_normal=cfg.include_normal,
                                 theta=TARGETS[cfg.f], f_name=cfg.f,
                                 studentize=cfg.studentize)
    manifest = _new_manifest(cfg, "coverage")
    manifest.seed_scopes = report.scopes
    path = out_dir / "coverage.csv"
    write_csv(path,
              ["n", "method", "level", "chains", "coverage", "avg_length",
               "excluded", "degenerate_draws"],
              ((r.n, r.method, r.level, r.chains, r.coverage, r.avg_length,
                r.excluded, r.degenerate_draws) for r in report.rows))
    paths = [path]
    fig = _figures(cfg)
    if fig:
        paths.append(fig.render_coverage(report, out_dir / "coverage.png"))
    _finish(manifest, out_dir, paths)
    return 0


def cmd_ml_moments(cfg: ExperimentConfig, out_dir: Path) -> int:
    table = ml_moment_diagnostic(cfg.n, cfg.chains, cfg.max_moment, cfg.beta,
                                 cfg.l_const, cfg.master_seed, workers=cfg.workers)
    manifest = _new_manifest(cfg, "ml-moments")
    manifest.seed_scopes = {"chains": table.scope}
    path = out_dir / "ml_moments.csv"
    write_csv(path, ["m", "empirical", "theoretical", "std_err"],
              ((r.m, r.empirical, r.theoretical, r.std_err) for r in table.rows))
    paths = [path]
    fig = _figures(cfg)
    if fig:
        paths.append(fig.render_moments(table, out_dir / "ml_moments.png"))
    _finish(manifest, out_dir, paths)
    return 0


COMMANDS = {
    "simulate": cmd_simulate,
    "bootstrap": cmd_bootstrap,
    "ecdf-compare": cmd_ecdf_compare,
    "coverage": cmd_coverage,
    "ml-moments": cmd_ml_moments,
}


def run_cli(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        cfg = _resolve_config(args)
        if args.command == "selftest":
            return 0 if run_selftest(cfg.master_seed) else 1
        out_dir = Path(args.out_dir) if args.out_dir else Path.cwd()
        out_dir.mkdir(parents=True, exist_ok=True)
        return COMMANDS[args.command](cfg, out_dir)
    except (RegenBootError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except Exception as e:  # runtime failures still honor the exit contract
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 1


def main(argv=None) -> int:
    return run_cli(argv)
