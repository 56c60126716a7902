"""The four simulation studies: true law, ECDF comparison, coverage, moments."""

import math

import numpy as np
import pytest

from regenboot.blocks import ZERO_ATOM, block_functional, decompose
from regenboot.bootstrap import RBB, RGB
from regenboot.chains import simulate_ssrw
from regenboot.empirical import ecdf, ks_to_normal, normal_cdf
from regenboot.errors import InsufficientBlocks
from regenboot.experiments import (FUNCTIONALS, INV_SQUARE_TARGET, NORMAL, TARGETS,
                                   cdf_comparison, chain_statistics,
                                   coverage_experiment, inv_square, ml_moment,
                                   ml_moment_diagnostic, true_distribution_mc)
from regenboot.seeding import derive_rng

from conftest import MASTER_SEED


class TestInvSquare:
    def test_scalar_values(self):
        assert inv_square(2) == 0.25
        assert inv_square(-2) == 0.25
        assert inv_square(3) == pytest.approx(1.0 / 9.0, abs=0.0)
        assert inv_square(0) == 0.0

    def test_array_matches_scalar(self):
        states = np.array([-3, -1, 0, 1, 2], dtype=np.float64)
        got = inv_square(states)
        assert got.tolist() == [inv_square(s) for s in states]

    def test_zeros_stay_zero_in_arrays(self):
        got = inv_square(np.zeros(5))
        assert got.tolist() == [0.0] * 5

    def test_target_matches_series_sum(self):
        # sum of 1/k^2 over nonzero integers, partial sum plus the
        # Euler-Maclaurin tail 1/N - 1/(2N^2) + 1/(6N^3)
        N = 10_000
        partial = math.fsum(1.0 / (k * k) for k in range(1, N + 1))
        tail = 1.0 / N - 1.0 / (2.0 * N * N) + 1.0 / (6.0 * N ** 3)
        assert 2.0 * (partial + tail) == pytest.approx(INV_SQUARE_TARGET, abs=1e-12)

    def test_registry_is_consistent(self):
        assert set(FUNCTIONALS) == set(TARGETS)
        assert TARGETS["inv_square"] == INV_SQUARE_TARGET


class TestChainStatistics:
    def test_deterministic(self):
        a = chain_statistics(4000, MASTER_SEED, "exp-tests:chain", 3)
        b = chain_statistics(4000, MASTER_SEED, "exp-tests:chain", 3)
        assert a.numreg == b.numreg
        assert np.array_equal(a.f_sums, b.f_sums)
        assert np.array_equal(a.lengths, b.lengths)

    def test_matches_manual_pipeline(self):
        rng = derive_rng(MASTER_SEED, "exp-tests:chain", 7)
        traj = simulate_ssrw(4000, rng)
        manual = block_functional(traj, decompose(traj, ZERO_ATOM), inv_square)
        auto = chain_statistics(4000, MASTER_SEED, "exp-tests:chain", 7)
        assert np.array_equal(auto.f_sums, manual.f_sums)
        assert np.array_equal(auto.lengths, manual.lengths)
        assert auto.f_b0 == manual.f_b0
        assert auto.f_tail == manual.f_tail

    def test_replicates_differ(self):
        a = chain_statistics(4000, MASTER_SEED, "exp-tests:chain", 0)
        b = chain_statistics(4000, MASTER_SEED, "exp-tests:chain", 1)
        assert a.numreg != b.numreg or not np.array_equal(a.f_sums, b.f_sums)

    def test_unknown_functional(self):
        with pytest.raises(KeyError):
            chain_statistics(100, 1, "exp-tests:chain", 0, "cube")


class TestTrueDistribution:
    def test_kept_plus_discarded_is_reps(self):
        td = true_distribution_mc(500, 30, MASTER_SEED)
        assert len(td.values) + td.discarded == 30
        assert len(td.visit_counts) == len(td.values)
        assert np.all(np.isfinite(td.values))

    def test_kept_chains_have_at_least_three_visits(self):
        # two complete blocks need the start visit plus two returns
        td = true_distribution_mc(500, 30, MASTER_SEED)
        assert td.visit_counts.min() >= 3

    def test_worker_count_does_not_change_output(self):
        a = true_distribution_mc(500, 30, MASTER_SEED, workers=1)
        b = true_distribution_mc(500, 30, MASTER_SEED, workers=2)
        assert np.array_equal(a.values, b.values)
        assert np.array_equal(a.visit_counts, b.visit_counts)
        assert a.discarded == b.discarded

    def test_scope_records_derivation_id(self):
        td = true_distribution_mc(500, 5, MASTER_SEED)
        assert td.scope == "true:n=500:chain"

    def test_rejects_nonpositive_reps(self):
        with pytest.raises(ValueError):
            true_distribution_mc(100, 0, 1)

    def test_median_ks_to_normal_decreases_with_horizon(self):
        # five independent batches per horizon; the median smooths over
        # batch-to-batch KS noise of roughly +-0.03 at 300 chains
        medians = []
        for n in (1_000, 10_000, 100_000):
            batch = [ks_to_normal(ecdf(true_distribution_mc(n, 300, MASTER_SEED + b).values))
                     for b in range(5)]
            medians.append(float(np.median(batch)))
        assert medians[0] > medians[1] > medians[2]
        assert medians[2] < 0.25


class TestIndependenceDiagnostic:
    def test_visit_count_nearly_uncorrelated_with_statistic(self, clt_sample):
        # the residual correlation is real: chains with many blocks carry a
        # slightly low block mean because the unfinished last excursion is
        # dropped, so the coefficient sits near -0.12 at this horizon
        corr = float(np.corrcoef(clt_sample.visit_counts, clt_sample.values)[0, 1])
        assert abs(corr) <= 0.2


@pytest.fixture(scope="module")
def comparison_table():
    # B and true_reps chosen so the merged jump grid exceeds the cap
    return cdf_comparison(10_000, 1100, 900, MASTER_SEED)


class TestCdfComparison:
    def test_grid_is_capped_and_sorted(self, comparison_table):
        assert len(comparison_table.x) == 2000
        assert np.all(np.diff(comparison_table.x) > 0)

    def test_curves_are_cdfs(self, comparison_table):
        for curve in (comparison_table.f_true, comparison_table.f_rbb,
                      comparison_table.f_rgb, comparison_table.f_normal):
            assert np.all(np.diff(curve) >= 0)
            assert np.all((curve >= 0.0) & (curve <= 1.0))
        # the grid ends at the largest observed value, where every ECDF is 1
        for curve in (comparison_table.f_true, comparison_table.f_rbb,
                      comparison_table.f_rgb):
            assert curve[-1] == 1.0

    def test_normal_column_matches_normal_cdf(self, comparison_table):
        got = normal_cdf(comparison_table.x)
        assert np.allclose(comparison_table.f_normal, got, atol=1e-14)

    def test_ks_keys_and_range(self, comparison_table):
        assert set(comparison_table.ks) == {"rbb_vs_true", "rgb_vs_true",
                                            "rbb_vs_normal", "rgb_vs_normal"}
        for v in comparison_table.ks.values():
            assert 0.0 < v < 0.6

    def test_degenerate_counts_per_method(self, comparison_table):
        assert set(comparison_table.degenerate_draws) == {RBB, RGB}
        # the fixed-count scheme never produces a zero-block draw
        assert comparison_table.degenerate_draws[RGB] == 0

    def test_metadata_round_trip(self, comparison_table):
        assert comparison_table.n == 10_000
        assert comparison_table.boot_reps == 1100
        assert comparison_table.true_reps == 900
        assert comparison_table.scopes["anchor"] == "ecdf:n=10000:anchor"

    def test_anchor_without_two_blocks_raises(self):
        # a two-step walk closes at most one block whatever the stream
        with pytest.raises(InsufficientBlocks):
            cdf_comparison(2, 50, 50, MASTER_SEED)

    def test_rejects_nonpositive_sizes(self):
        with pytest.raises(ValueError):
            cdf_comparison(1000, 0, 50, MASTER_SEED)
        with pytest.raises(ValueError):
            cdf_comparison(1000, 50, 0, MASTER_SEED)


@pytest.fixture(scope="module")
def coverage_report():
    return coverage_experiment([300, 800], 24, 200, 0.9, MASTER_SEED)


class TestCoverageExperiment:
    def test_row_layout(self, coverage_report):
        got = [(r.n, r.method) for r in coverage_report.rows]
        assert got == [(300, RBB), (300, RGB), (300, NORMAL),
                       (800, RBB), (800, RGB), (800, NORMAL)]

    def test_rows_are_paired(self, coverage_report):
        # every method sees the same chains, so the denominators agree
        for n in (300, 800):
            rows = [r for r in coverage_report.rows if r.n == n]
            assert len({r.chains for r in rows}) == 1
            assert len({r.excluded for r in rows}) == 1
            assert rows[0].chains + rows[0].excluded == 24

    def test_row_contents(self, coverage_report):
        for r in coverage_report.rows:
            assert r.level == 0.9
            assert 0.0 <= r.coverage <= 1.0
            assert r.avg_length > 0.0
            assert r.degenerate_draws >= 0
        assert coverage_report.requested_chains == 24
        assert coverage_report.boot_reps == 200

    def test_worker_count_does_not_change_rows(self, coverage_report):
        again = coverage_experiment([300, 800], 24, 200, 0.9, MASTER_SEED, workers=2)
        assert again.rows == coverage_report.rows

    def test_normal_row_optional(self):
        rep = coverage_experiment([300], 6, 50, 0.9, MASTER_SEED, include_normal=False)
        assert [r.method for r in rep.rows] == [RBB, RGB]

    def test_method_subset(self):
        rep = coverage_experiment([300], 6, 50, 0.9, MASTER_SEED, methods=(RGB,))
        assert [r.method for r in rep.rows] == [RGB, NORMAL]

    def test_validation(self):
        with pytest.raises(ValueError):
            coverage_experiment([], 10, 50, 0.9, 1)
        with pytest.raises(ValueError):
            coverage_experiment([0], 10, 50, 0.9, 1)
        with pytest.raises(ValueError):
            coverage_experiment([100], 0, 50, 0.9, 1)
        with pytest.raises(ValueError):
            coverage_experiment([100], 10, 0, 0.9, 1)
        with pytest.raises(ValueError, match="level"):
            coverage_experiment([100], 10, 50, 1.5, 1)
        with pytest.raises(ValueError, match="jackknife"):
            coverage_experiment([100], 10, 50, 0.9, 1, methods=("jackknife",))


class TestMittagLefflerMoments:
    def test_closed_forms_at_half(self):
        assert ml_moment(0, 0.5) == 1.0
        assert ml_moment(1, 0.5) == pytest.approx(2.0 / math.sqrt(math.pi), abs=1e-15)
        assert ml_moment(2, 0.5) == 2.0
        assert ml_moment(3, 0.5) == pytest.approx(8.0 / math.sqrt(math.pi), abs=1e-14)
        assert ml_moment(4, 0.5) == 12.0

    def test_diagnostic_table_shape(self):
        tab = ml_moment_diagnostic(50_000, 200, 2, 0.5, 2.0 ** -0.5, MASTER_SEED)
        assert [r.m for r in tab.rows] == [0, 1, 2]
        assert tab.scope == "mlmom:n=50000:chain"
        zeroth = tab.rows[0]
        assert zeroth.empirical == 1.0 and zeroth.std_err == 0.0
        for r in tab.rows[1:]:
            assert r.std_err > 0.0

    def test_diagnostic_tracks_theory(self):
        # loose bounds; a wrong scaling constant would miss by 40 percent
        tab = ml_moment_diagnostic(50_000, 200, 2, 0.5, 2.0 ** -0.5, MASTER_SEED)
        first, second = tab.rows[1], tab.rows[2]
        assert abs(first.empirical - first.theoretical) / first.theoretical < 0.2
        assert abs(second.empirical - second.theoretical) / second.theoretical < 0.35

    def test_worker_count_does_not_change_table(self):
        a = ml_moment_diagnostic(2_000, 40, 2, 0.5, 2.0 ** -0.5, MASTER_SEED, workers=1)
        b = ml_moment_diagnostic(2_000, 40, 2, 0.5, 2.0 ** -0.5, MASTER_SEED, workers=2)
        assert a.rows == b.rows

    def test_validation(self):
        with pytest.raises(ValueError, match="max_moment"):
            ml_moment_diagnostic(100, 50, 5, 0.5, 0.7, 1)
        with pytest.raises(ValueError, match="reps"):
            ml_moment_diagnostic(100, 1, 2, 0.5, 0.7, 1)
        with pytest.raises(ValueError, match="beta"):
            ml_moment_diagnostic(100, 50, 2, 1.0, 0.7, 1)
        with pytest.raises(ValueError, match="L_const"):
            ml_moment_diagnostic(100, 50, 2, 0.5, 0.0, 1)
