"""
The admission pipeline.

Gates run strictly in order: SLA, resources, path computation. A request
rejected at one gate never reaches the next, and rejections leave compute
and link state untouched.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Iterable, List, Optional, Set, Tuple, Union

import networkx as nx

from topoman.admission.request import (
    Admitted,
    AllocationDecision,
    InsufficientResources,
    Lease,
    Rejected,
    RejectionReason,
    Request,
    SlaBreach,
)
from topoman.admission.state import ComputeState
from topoman.errors import DuplicateRequestId, InvalidRequest, UnknownNode
from topoman.pce.compute import release, reserve
from topoman.pce.model import (
    NoFeasiblePath,
    PathConstraints,
    ResidualState,
    exact,
)
from topoman.pce.table import PathAllocationTable
from topoman.sla import SlaPolicy, SlaViolation, check_sla
from topoman.topology.graph import routing_graph
from topoman.topology.model import RESOURCE_DIMENSIONS, Topology

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Sufficient:
    """The resource gate passed."""

    def __bool__(self) -> bool:
        return True


SUFFICIENT = Sufficient()

ResourceVerdict = Union[Sufficient, RejectionReason]
ResourceGate = Callable[[Request, ComputeState, Topology], ResourceVerdict]


class ApplicationHandler:
    """
    Registers incoming requests and runs the SLA check on them.
    """

    def __init__(self):
        self._registered: Set[str] = set()

    def __contains__(self, request_id: str) -> bool:
        return request_id in self._registered

    def __len__(self) -> int:
        return len(self._registered)

    def handle_application(
        self, request: Request, policy: SlaPolicy
    ) -> List[SlaViolation]:
        """
        Register ``request`` and check it against ``policy``.

        :param request: The incoming request.
        :type request: Request
        :param policy: The SLA in force.
        :type policy: SlaPolicy
        :return: SLA violations, empty when compliant.
        :rtype: list[SlaViolation]
        :raises DuplicateRequestId: If the id was already registered.
        """
        if request.id in self._registered:
            raise DuplicateRequestId(
                f"request id {request.id!r} already registered"
            )
        self._registered.add(request.id)
        return check_sla(request, policy)


def check_resources(
    request: Request, compute_state: ComputeState, topology: Topology
) -> ResourceVerdict:
    """
    Check the target host has room for the request's demands.

    :param request: The request.
    :type request: Request
    :param compute_state: Current allocations.
    :type compute_state: ComputeState
    :param topology: The topology.
    :type topology: Topology
    :return: :data:`SUFFICIENT`, or the first failing dimension in
        cpu, mem, io order. Demand equal to free capacity passes.
    :rtype: Sufficient | InsufficientResources
    :raises UnknownNode: If the target does not exist.
    """
    topology.node(request.target)
    if request.target not in compute_state:
        raise UnknownNode(request.target)
    for dimension in RESOURCE_DIMENSIONS:
        free = compute_state.free_exact(request.target, dimension)
        if free < exact(getattr(request, f"{dimension}_demand")):
            return InsufficientResources(dimension)
    return SUFFICIENT


@dataclass(frozen=True)
class AdmissionResult:
    """
    A decision together with the state it leaves behind.

    :ivar decision: Admitted or Rejected.
    :ivar compute_state: Compute state after the decision.
    :ivar residuals: Link residuals after the decision.
    """

    decision: AllocationDecision
    compute_state: ComputeState
    residuals: ResidualState


# Justification: the pipeline touches every piece of run state.
# pylint: disable=too-many-positional-arguments
def admit(
    request: Request,
    policy: SlaPolicy,
    compute_state: ComputeState,
    residuals: ResidualState,
    path_table: PathAllocationTable,
    topology: Topology,
    now: int,
    *,
    handler: Optional[ApplicationHandler] = None,
    graph: Optional[nx.MultiGraph] = None,
    resource_gate: ResourceGate = check_resources,
) -> AdmissionResult:
    """
    Run a request through the SLA, resource and path gates.

    :param request: The request.
    :type request: Request
    :param policy: The SLA in force.
    :type policy: SlaPolicy
    :param compute_state: Current allocations.
    :type compute_state: ComputeState
    :param residuals: Current link residuals.
    :type residuals: ResidualState
    :param path_table: Path allocation table of this run.
    :type path_table: PathAllocationTable
    :param topology: The topology.
    :type topology: Topology
    :param now: Current tick, not before the request's arrival.
    :type now: int
    :param handler: Application handler registering request ids; a private
        one is used when omitted.
    :type handler: ApplicationHandler | None
    :param graph: Routing view; built from ``topology`` when omitted.
    :type graph: networkx.MultiGraph | None
    :param resource_gate: Rule deciding the resource gate.
    :type resource_gate: Callable
    :return: The decision and the resulting state.
    :rtype: AdmissionResult
    :raises UnknownNode: If the target, source or destination is unknown.
    :raises DuplicateRequestId: If the request id was seen before.
    """
    if now < request.arrival_time:
        raise InvalidRequest(
            f"request {request.id!r} handled at {now} before its arrival "
            f"at {request.arrival_time}"
        )
    handler = handler or ApplicationHandler()

    def reject(reason: RejectionReason) -> AdmissionResult:
        logger.debug(f"t={now} reject {request.id}: {reason}")
        return AdmissionResult(
            Rejected(request.id, reason), compute_state, residuals
        )

    violations = handler.handle_application(request, policy)
    if violations:
        return reject(SlaBreach(tuple(violations)))

    verdict = resource_gate(request, compute_state, topology)
    if not isinstance(verdict, Sufficient):
        return reject(verdict)

    constraints = PathConstraints(
        min_residual_bandwidth=request.bandwidth_demand,
        max_latency=policy.max_path_latency,
    )
    path, _ = path_table.lookup_or_compute(
        graph if graph is not None else routing_graph(topology),
        residuals,
        request.source,
        request.destination,
        constraints,
    )
    if isinstance(path, NoFeasiblePath):
        return reject(path)

    lease = Lease.for_request(request, path, now)
    new_residuals = reserve(residuals, path, request.bandwidth_demand)
    new_compute = compute_state.allocate(
        request.target,
        request.cpu_demand,
        request.mem_demand,
        request.io_demand,
    )
    logger.debug(f"t={now} admit {request.id} on {request.target} via {path}")
    return AdmissionResult(
        Admitted(request.id, path, lease), new_compute, new_residuals
    )


@dataclass(frozen=True)
class ExpiryResult:
    """
    Outcome of expiring leases.

    :ivar released: Ids of released leases, sorted.
    :ivar remaining: Leases still active, in their original order.
    :ivar compute_state: Compute state after release.
    :ivar residuals: Link residuals after release.
    """

    released: Tuple[str, ...]
    remaining: Tuple[Lease, ...]
    compute_state: ComputeState
    residuals: ResidualState


def expire_leases(
    compute_state: ComputeState,
    residuals: ResidualState,
    leases: Iterable[Lease],
    now: int,
) -> ExpiryResult:
    """
    Release every lease whose end tick is at or before ``now``.

    :param compute_state: Current allocations.
    :type compute_state: ComputeState
    :param residuals: Current link residuals.
    :type residuals: ResidualState
    :param leases: Active leases.
    :type leases: Iterable[Lease]
    :param now: Current tick.
    :type now: int
    :return: Released ids and the resulting state.
    :rtype: ExpiryResult
    """
    released: List[str] = []
    remaining: List[Lease] = []
    for lease in leases:
        if lease.end > now:
            remaining.append(lease)
            continue
        compute_state = compute_state.deallocate(
            lease.target, lease.cpu, lease.mem, lease.io
        )
        residuals = release(residuals, lease.path, lease.bandwidth)
        released.append(lease.request_id)
        logger.debug(f"t={now} expire {lease.request_id}")
    return ExpiryResult(
        tuple(sorted(released)), tuple(remaining), compute_state, residuals
    )
