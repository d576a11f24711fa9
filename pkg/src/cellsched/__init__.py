"""Slot-based simulation of a cellular downlink scheduler.

One base station serves one client per slot.  Strategies rank the active
flows by a per-flow index (rate, age, served traffic, and combinations);
the package measures the perceived-throughput criteria ALPT and logALPT
over completed downloads and ships a CLI for replicated, seeded
experiments: a strategy ranking table, a linear-combination weight sweep,
and a probabilistic-mixture sweep.
"""

from .channel import (
    ChannelConfig,
    ChannelRateSource,
    FixedRateSource,
    envelope_factor,
    rate_bounds,
    sample_rate,
)
from .errors import (
    AggregationError,
    CapabilityError,
    CellschedError,
    ParameterError,
    SchedulingError,
    UndefinedMetricError,
)
from .experiments import (
    ExperimentConfig,
    StrategyScore,
    SweepSpec,
    default_experiment_config,
    default_sim_config,
    experiment_from_dict,
    experiment_to_dict,
    run_experiment,
    simplex_grid,
    sweep_linear,
    sweep_probabilistic,
)
from .metrics import (
    AggregateReport,
    FlowRecord,
    MetricsReport,
    aggregate,
    alpt,
    log_alpt,
    summarize,
)
from .simcore import (
    BufferModel,
    FlowState,
    SimConfig,
    SimResult,
    TraceEvent,
    admit_arrivals,
    refill_buffers,
    run_simulation,
    serve_slot,
)
from .strategies import (
    FlowView,
    StrategySpec,
    compute_index,
    expected_file_size,
    linear_combine,
    pareto_posterior_density,
    select_client,
)
from .workload import (
    FlowSpec,
    ParetoMixture,
    WorkloadConfig,
    default_size_mixture,
    generate_workload,
    mixture_mean,
)

__version__ = "0.1.0"

__all__ = [
    "AggregateReport",
    "AggregationError",
    "BufferModel",
    "CapabilityError",
    "CellschedError",
    "ChannelConfig",
    "ChannelRateSource",
    "ExperimentConfig",
    "FixedRateSource",
    "FlowRecord",
    "FlowSpec",
    "FlowState",
    "FlowView",
    "MetricsReport",
    "ParameterError",
    "ParetoMixture",
    "SchedulingError",
    "SimConfig",
    "SimResult",
    "StrategyScore",
    "StrategySpec",
    "SweepSpec",
    "TraceEvent",
    "UndefinedMetricError",
    "WorkloadConfig",
    "admit_arrivals",
    "aggregate",
    "alpt",
    "compute_index",
    "default_experiment_config",
    "default_sim_config",
    "default_size_mixture",
    "envelope_factor",
    "expected_file_size",
    "experiment_from_dict",
    "experiment_to_dict",
    "generate_workload",
    "linear_combine",
    "log_alpt",
    "mixture_mean",
    "pareto_posterior_density",
    "rate_bounds",
    "refill_buffers",
    "run_experiment",
    "run_simulation",
    "sample_rate",
    "select_client",
    "serve_slot",
    "simplex_grid",
    "summarize",
    "sweep_linear",
    "sweep_probabilistic",
]
