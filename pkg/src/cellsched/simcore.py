"""Slot-by-slot downlink simulation of one base station.

Each slot: admit arrivals, run buffer refills, reveal every active flow's
channel rate, ask the strategy for one client, transfer min(rate, buffer)
to it.  A flow departs on the slot after the transfer that empties both its
buffer and its unfetched remainder; completed flows yield FlowRecords for
the metrics layer.

Buffer semantics are chosen so completion is exact in floating point: the
final transfer equals the remaining buffer, and x - x == 0.0 always, so no
flow ever gets stuck behind a rounding residue.  The ``served`` accumulator
is set to the exact file size on departure.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import seeding
from .channel import ChannelConfig, ChannelRateSource
from .errors import CapabilityError, ParameterError, SchedulingError
from .metrics import FlowRecord
from .strategies import FlowView, StrategySpec, select_client
from .workload import FlowSpec, WorkloadConfig, generate_workload

BUFFER_INFINITE = "infinite"
BUFFER_TCP_REFILL = "tcp-refill"

# drain-phase runaway guard; unreachable unless an invariant is broken
_DRAIN_SLACK = 10_000_000


@dataclass(frozen=True)
class BufferModel:
    """Base-station buffering discipline for staged file bytes.

    ``infinite`` stages the whole file on arrival.  ``tcp-refill`` stages
    ``initial_window``, waits ``rtt`` slots after the buffer empties, then
    delivers the next window, doubling it up to ``max_window`` (slow-start
    growth with saturation).
    """

    mode: str = BUFFER_INFINITE
    rtt: int = 30
    initial_window: float = 100.0
    max_window: float = 400.0

    def __post_init__(self):
        if self.mode not in (BUFFER_INFINITE, BUFFER_TCP_REFILL):
            raise ParameterError(f"unknown buffer mode {self.mode!r}")
        if self.rtt < 0:
            raise ParameterError(f"rtt={self.rtt} must be non-negative")
        if not 0.0 < self.initial_window <= self.max_window:
            raise ParameterError(
                f"need 0 < initial_window <= max_window, got "
                f"{self.initial_window} and {self.max_window}"
            )


@dataclass(slots=True)
class FlowState:
    """Mutable per-flow bookkeeping while the flow is active.

    ``buffer`` holds bytes staged for transmission; ``unfetched`` holds
    bytes still at the origin server (always 0 in infinite mode), so
    ``served + buffer + unfetched == file_size`` up to accumulated float
    rounding in ``served``.  ``rate_history_*`` feed the running mean rate
    estimate; ``last_served`` feeds tie-breaking.
    """

    spec: FlowSpec
    served: float = 0.0
    buffer: float = 0.0
    unfetched: float = 0.0
    refill_due: int | None = None
    congestion_window: float = 0.0
    departure_slot: int | None = None
    rate_history_sum: float = 0.0
    rate_history_count: int = 0
    last_served: int | None = None


@dataclass(frozen=True)
class SimConfig:
    """Everything one simulation run needs besides trace plumbing.

    ``horizon`` defaults to the workload's own horizon; arrivals stop there
    and, with ``drain_after_horizon``, service continues until every
    admitted flow finishes so each one yields a record.
    """

    workload: WorkloadConfig
    strategy: StrategySpec
    channel: ChannelConfig = ChannelConfig()
    buffer: BufferModel = BufferModel()
    horizon: int | None = None
    drain_after_horizon: bool = True

    def __post_init__(self):
        if self.horizon is None:
            object.__setattr__(self, "horizon", self.workload.horizon)
        if not self.horizon > 0:
            raise ParameterError(f"horizon={self.horizon} must be positive")
        if self.strategy.uses_buffer and self.buffer.mode != BUFFER_TCP_REFILL:
            raise CapabilityError(
                "sectf reads the station buffer; it needs buffer mode 'tcp-refill'"
            )


@dataclass(frozen=True)
class TraceEvent:
    """One slot of the service trace: who was served and how much moved."""

    t: int
    chosen_id: int | None
    transfer: float
    active_count: int


@dataclass(frozen=True)
class SimResult:
    records: tuple[FlowRecord, ...]
    unfinished: int
    trace: tuple[TraceEvent, ...] | None = None


def make_flow_state(spec: FlowSpec, model: BufferModel) -> FlowState:
    """Fresh FlowState with the buffer initialized per the buffer model."""
    if model.mode == BUFFER_INFINITE:
        return FlowState(spec=spec, buffer=spec.file_size, unfetched=0.0)
    staged = min(model.initial_window, spec.file_size)
    return FlowState(
        spec=spec,
        buffer=staged,
        unfetched=spec.file_size - staged,
        congestion_window=model.initial_window,
    )


def admit_arrivals(active, t, pending, model, start=0) -> int:
    """Admit every pending FlowSpec arriving at slot t; returns the next index.

    ``pending`` must be sorted by arrival_slot and ``start`` must point at
    the first spec not yet admitted.
    """
    i = start
    while i < len(pending) and pending[i].arrival_slot <= t:
        spec = pending[i]
        if spec.arrival_slot < t:
            raise SchedulingError(
                f"arrival at slot {spec.arrival_slot} was never admitted (now t={t})"
            )
        if spec.id in active:
            raise SchedulingError(f"duplicate flow id {spec.id} at slot {t}")
        active[spec.id] = make_flow_state(spec, model)
        i += 1
    return i


def refill_buffers(active, t, model: BufferModel):
    """Schedule refills for newly emptied buffers and deliver the ones due at t.

    Scheduling runs before delivery, so with rtt = 0 a refill lands in the
    same slot it was requested.  A delivery adds min(window, unfetched) and
    doubles the window up to the cap.
    """
    if model.mode != BUFFER_TCP_REFILL:
        return active
    for state in active.values():
        if state.buffer == 0.0 and state.unfetched > 0.0 and state.refill_due is None:
            state.refill_due = t + model.rtt
    for state in active.values():
        if state.refill_due == t:
            delta = min(state.congestion_window, state.unfetched)
            state.buffer += delta
            state.unfetched -= delta
            state.congestion_window = min(
                2.0 * state.congestion_window, model.max_window
            )
            state.refill_due = None
    return active


def serve_slot(active, t, rates, chosen):
    """Serve ``chosen`` for one slot; returns (record-or-None, transfer).

    Every active flow's rate history absorbs its rate for this slot whether
    or not it was served.  The chosen flow receives min(rate, buffer); if
    that empties both buffer and unfetched remainder the flow departs at
    t + 1 and is removed from ``active``.
    """
    for fid, state in active.items():
        r = rates[fid]
        state.rate_history_sum += r
        state.rate_history_count += 1
    if chosen is None:
        return None, 0.0
    state = active.get(chosen)
    if state is None:
        raise SchedulingError(f"chosen flow {chosen} is not active at slot {t}")
    if not state.buffer > 0.0:
        raise SchedulingError(f"chosen flow {chosen} has an empty buffer at slot {t}")
    transfer = min(rates[chosen], state.buffer)
    state.buffer -= transfer
    state.served += transfer
    state.last_served = t
    if state.buffer == 0.0 and state.unfetched == 0.0:
        state.served = state.spec.file_size
        state.departure_slot = t + 1
        del active[chosen]
        return (
            FlowRecord(
                file_size=state.spec.file_size,
                arrival=state.spec.arrival_slot,
                departure=t + 1,
            ),
            transfer,
        )
    return None, transfer


def run_simulation(
    config: SimConfig,
    *,
    flows=None,
    rate_source=None,
    collect_trace=False,
    trace_sink=None,
) -> SimResult:
    """Run one seeded simulation; deterministic given the config.

    All randomness derives from ``config.workload.seed``: the arrival
    stream, one channel stream per flow (so rate draws never depend on
    scheduling decisions), and a dedicated stream for probabilistic
    strategy choices, which consumes exactly one draw per slot.

    ``flows`` (sorted by arrival_slot) replaces the generated workload and
    ``rate_source`` the seeded channel source; both exist for crafted
    scenarios with known arithmetic.
    """
    if flows is None:
        flows = generate_workload(config.workload)
    source = (
        ChannelRateSource(config.workload.seed, config.channel)
        if rate_source is None
        else rate_source
    )
    choice_rng = seeding.stream(config.workload.seed, seeding.CHOICE_STREAM)

    strategy = config.strategy
    anticipating = strategy.anticipating
    assigned_mean = strategy.mean_rate_mode == "assigned"
    model = config.buffer
    tcp = model.mode == BUFFER_TCP_REFILL
    horizon = config.horizon
    hard_stop = horizon + _DRAIN_SLACK

    active: dict[int, FlowState] = {}
    streams = {}
    records = []
    trace = [] if collect_trace else None

    next_pending = 0
    t = 0
    while True:
        if t >= horizon:
            if not config.drain_after_horizon or not active:
                break
            if t >= hard_stop:
                raise SchedulingError(
                    f"drain phase still busy after {t} slots; invariant broken"
                )
        else:
            before = next_pending
            next_pending = admit_arrivals(active, t, flows, model, next_pending)
            for spec in flows[before:next_pending]:
                streams[spec.id] = source.stream_for(spec)
        if tcp:
            refill_buffers(active, t, model)

        rates = {}
        views = []
        for fid, state in active.items():
            r = streams[fid].draw(t)
            rates[fid] = r
            if state.buffer > 0.0:
                if assigned_mean:
                    mean_est = state.spec.mean_rate
                else:
                    mean_est = (state.rate_history_sum + r) / (
                        state.rate_history_count + 1
                    )
                views.append(
                    FlowView(
                        id=fid,
                        t=t,
                        age=t - state.spec.arrival_slot,
                        served=state.served,
                        buffer=state.buffer,
                        rate=r,
                        mean_rate_est=mean_est,
                        true_size=state.spec.file_size if anticipating else None,
                        last_served=state.last_served,
                    )
                )

        chosen = select_client(strategy, views, choice_rng)
        active_count = len(active)
        record, transfer = serve_slot(active, t, rates, chosen)
        if record is not None:
            records.append(record)
            del streams[chosen]
        if trace is not None or trace_sink is not None:
            event = TraceEvent(t, chosen, transfer, active_count)
            if trace is not None:
                trace.append(event)
            if trace_sink is not None:
                trace_sink(event)
        t += 1

    return SimResult(
        records=tuple(records),
        unfinished=len(active),
        trace=tuple(trace) if trace is not None else None,
    )
