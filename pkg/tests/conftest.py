"""Shared fixtures: the expensive Monte Carlo samples are session-scoped so
the per-module examples and the acceptance suite reuse one run each."""

import pytest

from regenboot import ml_moment_diagnostic, true_distribution_mc

MASTER_SEED = 20240814


@pytest.fixture(scope="session")
def master_seed():
    return MASTER_SEED


@pytest.fixture(scope="session")
def clt_sample():
    """Studentized statistics of 2000 independent chains at n = 10^5."""
    return true_distribution_mc(100_000, 2000, MASTER_SEED)


@pytest.fixture(scope="session")
def visit_moments():
    """Moment table of the normalized visit count, 1000 chains at n = 10^6."""
    return ml_moment_diagnostic(1_000_000, 1000, 2, 0.5, 2.0 ** -0.5, MASTER_SEED)
