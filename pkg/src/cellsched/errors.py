"""Exception types shared across the package.

All of them derive from CellschedError so callers (notably the CLI) can
catch every expected failure in one clause while programmatic users still
get the conventional ValueError/RuntimeError lineage.
"""


class CellschedError(Exception):
    """Base class for every error this package raises on purpose."""


class ParameterError(CellschedError, ValueError):
    """A configuration value or argument is outside its documented domain."""


class CapabilityError(CellschedError, RuntimeError):
    """A strategy needs information the current setup does not provide."""


class SchedulingError(CellschedError, RuntimeError):
    """The scheduling contract was violated (bad chosen id, broken invariant)."""


class UndefinedMetricError(CellschedError, ValueError):
    """A metric was requested over an empty record set."""


class AggregationError(CellschedError, ValueError):
    """Cross-replication aggregation needs at least two reports."""
