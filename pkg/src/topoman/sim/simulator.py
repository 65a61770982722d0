"""
Deterministic discrete-event simulation of a Batch workload.

Each arrival joins the job queue and schedules an admission attempt at the
same tick; the attempt takes the queue head through the scheme's pipeline.
Rejected requests are dropped. Admitted requests hold their lease until
its end tick. Utilization is sampled on a fixed grid that depends only on
the trace, so runs of different schemes over one trace line up.
"""

from __future__ import annotations

import heapq
import logging
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from topoman.admission.pipeline import ApplicationHandler, expire_leases
from topoman.admission.request import Admitted, Lease, reason_code
from topoman.admission.state import ComputeState
from topoman.baselines import (
    CapacityAwareParams,
    RealisticParams,
    Scheme,
    baseline_pipeline,
)
from topoman.errors import ConfigError, SchedulerStall, ValidationError
from topoman.fairshare import ShareEntry, fair_shares, usage
from topoman.metrics.sampling import (
    UtilizationSeries,
    pool_utilization,
    sample,
)
from topoman.pce.model import ResidualState
from topoman.pce.table import CacheCounters, PathAllocationTable
from topoman.sim.events import (
    DecisionRecord,
    EventKind,
    EventRecord,
    JobQueue,
    SimEvent,
)
from topoman.sim.trace import WorkloadTrace, validate_trace
from topoman.sla import SlaPolicy
from topoman.topology.graph import routing_graph
from topoman.topology.loader import validate
from topoman.topology.model import Topology

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RunParams:
    """
    Everything a run needs besides topology, trace and scheme.

    :ivar sla: The SLA in force.
    :ivar realistic: Product-logic threshold.
    :ivar capacity_aware: Risk factors.
    :ivar retry: Retry policy for rejected requests; only ``never``.
    """

    sla: SlaPolicy = field(default_factory=SlaPolicy)
    realistic: RealisticParams = field(default_factory=RealisticParams)
    capacity_aware: CapacityAwareParams = field(
        default_factory=CapacityAwareParams
    )
    retry: str = "never"

    def __post_init__(self):
        if self.retry != "never":
            raise ConfigError(f"retry must be 'never', got {self.retry!r}")

    def to_dict(self) -> dict:
        """Dictionary form."""
        return {
            "sla": self.sla.to_dict(),
            "realistic": self.realistic.to_dict(),
            "capacity_aware": self.capacity_aware.to_dict(),
            "retry": self.retry,
        }


@dataclass(frozen=True)
class SimResult:
    """
    Everything one run produced.

    :ivar scheme: Scheme label.
    :ivar events: Event log in processing order.
    :ivar decisions: Admission outcomes in queue order.
    :ivar series: Utilization samples.
    :ivar cache: Path allocation table counters at the end of the run.
    :ivar compute_state: Final compute allocations.
    :ivar residuals: Final link residuals.
    :ivar pools: Per-pool utilization at the last sample.
    """

    scheme: str
    events: Tuple[EventRecord, ...]
    decisions: Tuple[DecisionRecord, ...]
    series: UtilizationSeries
    cache: CacheCounters
    compute_state: ComputeState
    residuals: ResidualState
    pools: Dict[str, Dict[str, float]] = field(default_factory=dict)

    def admission_counts(self) -> dict:
        """
        Admitted and rejected totals plus rejections per reason code.

        :return: ``{"admitted": n, "rejected": m, "by_reason": {...}}``.
        :rtype: dict
        """
        outcomes = Counter(d.outcome for d in self.decisions)
        reasons = Counter(
            d.detail.split(":", 1)[0]
            for d in self.decisions
            if d.outcome == "rejected"
        )
        return {
            "admitted": outcomes["admitted"],
            "rejected": outcomes["rejected"],
            "by_reason": dict(sorted(reasons.items())),
        }

    def summary(self) -> dict:
        """Contents of ``summary.json``."""
        return {
            "scheme": self.scheme,
            "admissions": self.admission_counts(),
            "cache": self.cache.to_dict(),
            "pools": self.pools,
        }


def sample_ticks(trace: WorkloadTrace, sample_interval: int) -> List[int]:
    """
    The sampling grid ``0, k, 2k, ...`` up to the trace's horizon.

    :raises ConfigError: If ``sample_interval`` is not a positive integer.
    """
    if (
        isinstance(sample_interval, bool)
        or not isinstance(sample_interval, int)
        or sample_interval <= 0
    ):
        raise ConfigError(
            f"sample_interval must be a positive integer, got "
            f"{sample_interval!r}"
        )
    return list(range(0, trace.horizon + 1, sample_interval))


def _shares(
    leases: Mapping[str, Lease], topology: Topology
) -> Tuple[Dict[str, float], Dict[str, float]]:
    """Effective CPU share and usage fraction per active lease."""
    by_host: Dict[str, List[ShareEntry]] = {}
    for lease_id in sorted(leases):
        lease = leases[lease_id]
        by_host.setdefault(lease.target, []).append(
            ShareEntry(lease_id, lease.cpu, lease.weight)
        )
    shares: Dict[str, float] = {}
    for host in sorted(by_host):
        capacity = topology.node(host).cpu_capacity
        shares.update(fair_shares(by_host[host], capacity))
    shares = {k: shares[k] for k in sorted(shares)}
    fractions = {k: leases[k].usage_fraction for k in shares}
    return shares, fractions


class _Run:
    """Mutable bookkeeping of one simulation."""

    def __init__(
        self,
        topology: Topology,
        trace: WorkloadTrace,
        scheme: Scheme,
        params: RunParams,
        sample_interval: int,
    ):
        self.topology = topology
        self.scheme = scheme
        self.params = params
        self.graph = routing_graph(topology)
        self.table = PathAllocationTable()
        self.handler = ApplicationHandler()
        self.queue = JobQueue()
        self.compute = ComputeState.from_topology(topology)
        self.residuals = ResidualState.from_capacities(
            topology.link_capacities()
        )
        self.leases: Dict[str, Lease] = {}
        self.requests = {r.id: r for r in trace}
        self.events: List[EventRecord] = []
        self.decisions: List[DecisionRecord] = []
        self.series = UtilizationSeries(scheme.value)
        self.pools: Dict[str, Dict[str, float]] = {}
        self.heap: List[SimEvent] = [
            SimEvent(r.arrival_time, EventKind.ARRIVAL, r.id) for r in trace
        ]
        self.heap.extend(
            SimEvent(t, EventKind.SAMPLE, str(t))
            for t in sample_ticks(trace, sample_interval)
        )
        heapq.heapify(self.heap)

    def execute(self) -> SimResult:
        """Process events until none are left."""
        handlers = {
            EventKind.LEASE_EXPIRY: self.on_expiry,
            EventKind.ARRIVAL: self.on_arrival,
            EventKind.ADMISSION_ATTEMPT: self.on_attempt,
            EventKind.SAMPLE: self.on_sample,
        }
        while self.heap:
            event = heapq.heappop(self.heap)
            detail = handlers[event.kind](event)
            self.events.append(
                EventRecord(
                    event.time, event.kind.label, event.payload, detail
                )
            )
        if self.queue:
            raise SchedulerStall(
                f"{len(self.queue)} requests still queued with no events left"
            )
        return SimResult(
            scheme=self.scheme.value,
            events=tuple(self.events),
            decisions=tuple(self.decisions),
            series=self.series,
            cache=self.table.counters(),
            compute_state=self.compute,
            residuals=self.residuals,
            pools=self.pools,
        )

    def on_arrival(self, event: SimEvent) -> str:
        """Queue the request and schedule its attempt."""
        self.queue.push(self.requests[event.payload])
        heapq.heappush(
            self.heap,
            SimEvent(event.time, EventKind.ADMISSION_ATTEMPT, event.payload),
        )
        return f"queued {len(self.queue)}"

    def on_attempt(self, event: SimEvent) -> str:
        """Run the queue head through the pipeline."""
        request = self.queue.pop()
        result = baseline_pipeline(
            request,
            self.scheme,
            self.params.sla,
            self.compute,
            self.residuals,
            self.table,
            self.topology,
            event.time,
            handler=self.handler,
            graph=self.graph,
            realistic=self.params.realistic,
            capacity_aware=self.params.capacity_aware,
        )
        self.compute = result.compute_state
        self.residuals = result.residuals
        decision = result.decision
        if isinstance(decision, Admitted):
            lease = decision.lease
            self.leases[request.id] = lease
            heapq.heappush(
                self.heap,
                SimEvent(lease.end, EventKind.LEASE_EXPIRY, request.id),
            )
            record = DecisionRecord(
                request.id, event.time, "admitted", str(decision.path)
            )
        else:
            record = DecisionRecord(
                request.id,
                event.time,
                "rejected",
                f"{reason_code(decision.reason)}: {decision.reason}",
            )
        self.decisions.append(record)
        return f"{record.outcome} {request.id}"

    def on_expiry(self, event: SimEvent) -> str:
        """Release one lease."""
        lease = self.leases.pop(event.payload)
        result = expire_leases(
            self.compute, self.residuals, [lease], event.time
        )
        self.compute = result.compute_state
        self.residuals = result.residuals
        return "released"

    def on_sample(self, event: SimEvent) -> str:
        """Record utilization."""
        shares, fractions = _shares(self.leases, self.topology)
        item = sample(
            self.compute,
            self.residuals,
            shares,
            fractions,
            self.topology,
            event.time,
        )
        self.series.append(item)
        host_usage: Dict[str, float] = {}
        for lease_id, used in usage(shares, fractions).items():
            host = self.leases[lease_id].target
            host_usage[host] = host_usage.get(host, 0.0) + used
        self.pools = pool_utilization(self.topology, self.compute, host_usage)
        return f"cpu={item.cpu!r} mem={item.mem!r}"


# Justification: run mirrors the documented (topology, trace, scheme,
# params, sample_interval) signature.
# pylint: disable=too-many-positional-arguments
def run(
    topology: Topology,
    trace: WorkloadTrace,
    scheme: Scheme,
    params: Optional[RunParams] = None,
    sample_interval: int = 1,
) -> SimResult:
    """
    Simulate ``trace`` on ``topology`` under ``scheme``.

    :param topology: The data center.
    :type topology: Topology
    :param trace: Requests in arrival order.
    :type trace: WorkloadTrace
    :param scheme: Admission scheme.
    :type scheme: Scheme
    :param params: SLA and baseline parameters; defaults when omitted.
    :type params: RunParams | None
    :param sample_interval: Ticks between samples.
    :type sample_interval: int
    :return: The run's event log, decisions, samples and final state.
    :rtype: SimResult
    :raises ValidationError: If the topology breaks an invariant.
    :raises UnknownNode: If the trace names a node the topology lacks.
    :raises SchedulerStall: If requests are left queued at the end.
    :raises ConservationError: If a sample finds something over capacity.
    """
    violations = validate(topology)
    if violations:
        raise ValidationError(violations)
    validate_trace(trace, topology)
    params = params or RunParams()
    result = _Run(
        topology, trace, Scheme(scheme), params, sample_interval
    ).execute()
    counts = result.admission_counts()
    logger.info(
        f"{result.scheme}: admitted {counts['admitted']}, rejected "
        f"{counts['rejected']}, {len(result.series)} samples"
    )
    return result


# Justification: same inputs as run plus the worker count.
# pylint: disable=too-many-positional-arguments
def run_comparison(
    topology: Topology,
    trace: WorkloadTrace,
    schemes: Sequence[Scheme],
    params: Optional[RunParams] = None,
    sample_interval: int = 1,
    *,
    jobs: int = 1,
) -> Dict[str, SimResult]:
    """
    Run each scheme independently on the same inputs.

    :param schemes: Schemes to run; duplicates are run once.
    :type schemes: Sequence[Scheme]
    :param jobs: Worker threads; 1 runs the schemes one after another.
    :type jobs: int
    :return: Results keyed by scheme label, in ``schemes`` order.
    :rtype: dict[str, SimResult]
    """
    ordered = list(dict.fromkeys(Scheme(s) for s in schemes))
    if jobs <= 1 or len(ordered) <= 1:
        return {
            s.value: run(topology, trace, s, params, sample_interval)
            for s in ordered
        }
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        futures = {
            s: pool.submit(run, topology, trace, s, params, sample_interval)
            for s in ordered
        }
        return {s.value: futures[s].result() for s in ordered}
