"""Regenerative-block bootstrap inference for atomic null recurrent chains.

The package simulates integer-state chains (the symmetric random walk
first), splits trajectories into regeneration blocks at an atom, estimates
block-mean functionals with studentized errors, and runs two block
bootstrap schemes with deterministic, parallel-safe seeding.
"""

__version__ = "0.1.0"

from .blocks import (AtomSpec, BlockDecomposition, BlockStatistics, OccupationPaths,
                     ZERO_ATOM, block_functional, decompose, occupation_processes,
                     partial_sum)
from .bootstrap import (BootstrapDistribution, BootstrapSample, ConfidenceInterval,
                        METHODS, RBB, RGB, bootstrap_distribution, bootstrap_statistic,
                        confidence_interval, quantile, rbb_draw, rgb_draw)
from .chains import ChainModel, Trajectory, simulate_chain, simulate_ssrw, ssrw_model
from .config import ExperimentConfig, config_from_dict, load_config
from .empirical import Ecdf, ecdf, ks_distance, ks_to_normal, normal_cdf, normal_quantile
from .errors import (ConfigError, DegenerateDraw, InsufficientBlocks, RegenBootError,
                     TooManyDegenerate, ZeroVariance)
from .estimators import (EstimateSummary, normalized_visit_count, point_estimate,
                         studentized_statistic, summarize, variance_estimate,
                         variance_estimate_single_pass)
from .experiments import (CoverageReport, CoverageRow, EcdfTable, INV_SQUARE_TARGET,
                          MomentRow, MomentTable, TrueDistribution, cdf_comparison,
                          chain_statistics, coverage_experiment, inv_square,
                          ml_moment, ml_moment_diagnostic, true_distribution_mc)
from .seeding import derive_key, derive_rng, raw_words

__all__ = [name for name in dir() if not name.startswith("_")]
