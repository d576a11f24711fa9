"""Perceived-throughput metrics over completed flows.

ALPT averages each flow's file size divided by its sojourn time; logALPT
averages the logarithm of the same ratio, which rewards spreading service
across flows instead of optimizing a few lucky ones.  Replication results
aggregate into mean +/- sample standard deviation.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass

from .errors import AggregationError, ParameterError, UndefinedMetricError


@dataclass(frozen=True)
class FlowRecord:
    """One completed download: size, arrival slot, and departure slot."""

    file_size: float
    arrival: int
    departure: int

    def __post_init__(self):
        if not self.file_size > 0.0:
            raise ParameterError(f"file_size={self.file_size} must be positive")
        if not self.departure > self.arrival:
            raise ParameterError(
                f"departure={self.departure} must exceed arrival={self.arrival}"
            )

    @property
    def sojourn(self) -> int:
        return self.departure - self.arrival

    @property
    def perceived_throughput(self) -> float:
        return self.file_size / self.sojourn


@dataclass(frozen=True)
class MetricsReport:
    """Scores of one simulation run plus how many flows they cover."""

    alpt: float
    log_alpt: float
    completed: int
    unfinished: int = 0

    def to_dict(self) -> dict:
        return {
            "alpt": self.alpt,
            "log_alpt": self.log_alpt,
            "completed": self.completed,
            "unfinished": self.unfinished,
        }


def alpt(records) -> float:
    """Mean perceived throughput (1/N) * sum A_k / (T_k_end - T_k_0)."""
    if not records:
        raise UndefinedMetricError("ALPT is undefined over zero completed flows")
    return statistics.fmean(r.perceived_throughput for r in records)


def log_alpt(records, base: float | None = None) -> float:
    """Mean log perceived throughput; natural log unless ``base`` is given."""
    if not records:
        raise UndefinedMetricError("logALPT is undefined over zero completed flows")
    value = statistics.fmean(math.log(r.perceived_throughput) for r in records)
    if base is not None:
        value /= math.log(base)
    return value


def summarize(records, unfinished: int = 0, base: float | None = None) -> MetricsReport:
    """Bundle both metrics over one run's completed flows."""
    return MetricsReport(
        alpt=alpt(records),
        log_alpt=log_alpt(records, base=base),
        completed=len(records),
        unfinished=unfinished,
    )


@dataclass(frozen=True)
class AggregateReport:
    """Across-replication mean +/- sample standard deviation of each metric."""

    alpt_mean: float
    alpt_std: float
    log_alpt_mean: float
    log_alpt_std: float
    replications: int
    completed_total: int
    unfinished_total: int

    def to_dict(self) -> dict:
        return {
            "alpt_mean": self.alpt_mean,
            "alpt_std": self.alpt_std,
            "log_alpt_mean": self.log_alpt_mean,
            "log_alpt_std": self.log_alpt_std,
            "replications": self.replications,
            "completed_total": self.completed_total,
            "unfinished_total": self.unfinished_total,
        }


def aggregate(reports) -> AggregateReport:
    """Unweighted mean and sample (n-1) std of each metric across replications."""
    reports = list(reports)
    if len(reports) < 2:
        raise AggregationError(
            f"need at least 2 replications to aggregate, got {len(reports)}"
        )
    alpts = [r.alpt for r in reports]
    logs = [r.log_alpt for r in reports]
    return AggregateReport(
        alpt_mean=statistics.fmean(alpts),
        alpt_std=statistics.stdev(alpts),
        log_alpt_mean=statistics.fmean(logs),
        log_alpt_std=statistics.stdev(logs),
        replications=len(reports),
        completed_total=sum(r.completed for r in reports),
        unfinished_total=sum(r.unfinished for r in reports),
    )
