"""Exception types shared across the package."""


class RegenBootError(Exception):
    """Base class for all errors raised by regenboot."""


class InsufficientBlocks(RegenBootError):
    """Too few complete regeneration blocks for the requested statistic.

    The point estimate needs at least one block, the variance estimate
    and anything studentized need at least two.
    """


class ZeroVariance(RegenBootError):
    """All block sums are identical, so studentization is undefined."""


class DegenerateDraw(RegenBootError):
    """A block-bootstrap draw retained zero blocks.

    Happens when the first resampled block alone is longer than the
    horizon n, so no complete block fits.
    """


class TooManyDegenerate(RegenBootError):
    """Degenerate draws exceeded the tolerated budget.

    Raised after 100 consecutive degenerate draws inside one replicate,
    or when more than 1% of the replicates of a bootstrap distribution
    needed a redraw.
    """


class ConfigError(RegenBootError):
    """Invalid configuration file or field value."""
