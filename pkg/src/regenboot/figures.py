"""Quick-look figures for the CLI report path.

Every subcommand that writes delimited output also renders a PNG next to
it.  Rendering is deterministic: the Agg backend is forced, geometry and
fonts are pinned, and the PNG metadata carries a fixed software tag, so a
rerun with the same config and seed reproduces the image byte for byte.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)
import numpy as np  # noqa: E402

_RC = {
    "figure.figsize": (7.0, 4.5),
    "figure.dpi": 100,
    "savefig.dpi": 100,
    "font.family": "DejaVu Sans",
    "font.size": 10,
    "axes.grid": True,
    "grid.alpha": 0.3,
}

_METADATA = {"Software": "regenboot"}


def _save(fig, path) -> Path:
    path = Path(path)
    fig.savefig(path, metadata=_METADATA)
    plt.close(fig)
    return path


def render_trajectory(states, visit_times, numreg: int, path) -> Path:
    """Walk path with markers at the atom visits.

    A vertical line marks the end of the last complete block; the stretch
    after it is the unfinished excursion that no block statistic sees.
    """
    states = np.asarray(states)
    visit_times = np.asarray(visit_times)
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        ax.plot(np.arange(len(states)), states, lw=0.8, color="#1f77b4")
        ax.axhline(0.0, lw=0.6, color="black")
        if len(visit_times):
            ax.plot(visit_times, np.zeros(len(visit_times)), linestyle="none",
                    marker="*", markersize=7, color="#ff7f0e", label="atom visits")
        if numreg >= 1:
            ax.axvline(float(visit_times[numreg]), lw=1.0, color="#2ca02c",
                       linestyle="--", label="last complete block")
        ax.set_xlabel("t")
        ax.set_ylabel("state")
        ax.set_title(f"trajectory, n={len(states) - 1}, complete blocks={numreg}")
        if len(visit_times):
            ax.legend(loc="best")
        return _save(fig, path)


def render_bootstrap(statistics_by_method: dict, path) -> Path:
    """Step ECDFs of the replicate statistics, one curve per method."""
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        for method, values in statistics_by_method.items():
            xs = np.sort(np.asarray(values, dtype=np.float64))
            ys = np.arange(1, len(xs) + 1) / len(xs)
            ax.step(xs, ys, where="post", label=method)
        ax.set_xlabel("replicate statistic")
        ax.set_ylabel("ECDF")
        ax.set_ylim(0.0, 1.02)
        ax.set_title("bootstrap replicate distribution")
        ax.legend(loc="lower right")
        return _save(fig, path)


def render_ecdf_table(table, path) -> Path:
    """Overlay of the true, bootstrap, and normal distribution curves."""
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        ax.plot(table.x, table.f_true, lw=1.4, color="black", label="true")
        ax.plot(table.x, table.f_rbb, lw=1.1, linestyle="--", color="#1f77b4",
                label="rbb")
        ax.plot(table.x, table.f_rgb, lw=1.1, linestyle="-.", color="#d62728",
                label="rgb")
        ax.plot(table.x, table.f_normal, lw=1.1, linestyle=":", color="#7f7f7f",
                label="normal")
        ax.set_xlabel("x")
        ax.set_ylabel("F(x)")
        ax.set_ylim(0.0, 1.02)
        ax.set_title(f"distribution functions, n={table.n}, B={table.boot_reps}")
        ax.legend(loc="lower right")
        return _save(fig, path)


def render_coverage(report, path) -> Path:
    """Coverage and average interval length against the horizon, log-x."""
    series = {}
    for row in report.rows:
        series.setdefault(row.method, []).append(row)
    with plt.rc_context(_RC):
        fig, (ax_cov, ax_len) = plt.subplots(1, 2, figsize=(9.5, 4.0))
        for method, rows in series.items():
            ns = [r.n for r in rows]
            ax_cov.plot(ns, [r.coverage for r in rows], marker="o", label=method)
            ax_len.plot(ns, [r.avg_length for r in rows], marker="o", label=method)
        ax_cov.axhline(report.level, lw=0.9, color="black", linestyle="--",
                       label=f"nominal {report.level:g}")
        for ax, ylabel in ((ax_cov, "coverage"), (ax_len, "average length")):
            ax.set_xscale("log")
            ax.set_xlabel("n")
            ax.set_ylabel(ylabel)
            ax.legend(loc="best")
        ax_cov.set_ylim(0.0, 1.0)
        fig.tight_layout()
        return _save(fig, path)


def render_moments(table, path) -> Path:
    """Empirical visit-count moments with 2-SE bars against theory."""
    ms = [r.m for r in table.rows]
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        ax.errorbar(ms, [r.empirical for r in table.rows],
                    yerr=[2.0 * r.std_err for r in table.rows],
                    fmt="o", capsize=4, label="empirical (2 SE)")
        ax.plot(ms, [r.theoretical for r in table.rows], marker="x",
                linestyle="none", markersize=9, color="#d62728", label="limit law")
        ax.set_xticks(ms)
        ax.set_xlabel("moment order m")
        ax.set_ylabel("E[(T(n)/u(n))^m]")
        ax.set_title(f"normalized visit-count moments, n={table.n}, reps={table.reps}")
        ax.legend(loc="upper left")
        return _save(fig, path)
