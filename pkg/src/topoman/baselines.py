"""
Comparison admission schemes.

Both baselines replace only the resource gate of the admission pipeline;
the SLA gate and path computation are shared with the proposed scheme.

* Realistic: product logic. Each dimension's headroom after admission,
  ``clamp(1 - projected_utilization, 0, 1)``, is multiplied into a score
  that must reach a threshold.
* Capacity-aware: CPU and I/O demands are inflated by risk factors before
  the capacity check; memory is taken at face value.

Both rules and their default parameters are reconstructions, not
published values.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional

import networkx as nx

from topoman.admission.pipeline import (
    SUFFICIENT,
    AdmissionResult,
    ApplicationHandler,
    ResourceGate,
    ResourceVerdict,
    admit,
    check_resources,
)
from topoman.admission.request import (
    BelowAdmissionThreshold,
    InsufficientResources,
    Request,
)
from topoman.admission.state import ComputeState
from topoman.errors import ConfigError, UnknownNode
from topoman.pce.model import ResidualState, exact
from topoman.pce.table import PathAllocationTable
from topoman.sla import SlaPolicy
from topoman.topology.model import RESOURCE_DIMENSIONS, Topology


class Scheme(str, Enum):
    """Admission schemes that can drive a simulation."""

    PROPOSED = "proposed"
    REALISTIC = "realistic"
    CAPACITY_AWARE = "capacity-aware"

    @classmethod
    def parse(cls, value: str) -> "Scheme":
        """
        Scheme from its name; ``capacity_aware`` is accepted too.

        :raises ConfigError: On an unknown name.
        """
        try:
            return cls(str(value).strip().lower().replace("_", "-"))
        except ValueError:
            names = ", ".join(s.value for s in cls)
            raise ConfigError(
                f"unknown scheme {value!r} (expected one of {names})"
            ) from None


@dataclass(frozen=True)
class RealisticParams:
    """
    Parameters of the product-logic scheme.

    :ivar theta: Admission threshold in (0, 1].
    """

    theta: float = 0.2

    def __post_init__(self):
        if not 0 < self.theta <= 1:
            raise ConfigError(
                f"realistic.theta must be in (0, 1], got {self.theta}"
            )

    def to_dict(self) -> dict:
        """Dictionary form."""
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Optional[dict]) -> "RealisticParams":
        """Create from the scenario's ``realistic`` object."""
        return cls(**_known(cls, data, "realistic"))


@dataclass(frozen=True)
class CapacityAwareParams:
    """
    Parameters of the risk-inflation scheme.

    :ivar risk_cpu: CPU demand inflation factor, >= 1.
    :ivar risk_io: I/O demand inflation factor, >= 1.
    """

    risk_cpu: float = 1.3
    risk_io: float = 1.3

    def __post_init__(self):
        for name in ("risk_cpu", "risk_io"):
            value = getattr(self, name)
            if not value >= 1:
                raise ConfigError(
                    f"capacity_aware.{name} must be >= 1, got {value}"
                )

    def to_dict(self) -> dict:
        """Dictionary form."""
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Optional[dict]) -> "CapacityAwareParams":
        """Create from the scenario's ``capacity_aware`` object."""
        return cls(**_known(cls, data, "capacity_aware"))


def _known(cls, data: Optional[dict], section: str) -> dict:
    data = dict(data or {})
    unknown = set(data) - set(cls.__dataclass_fields__)
    if unknown:
        raise ConfigError(f"unknown {section} keys: {sorted(unknown)}")
    return data


def _projected(
    request: Request, state: ComputeState, dimension: str
) -> Fraction:
    capacity = state.capacity_exact(request.target, dimension)
    demand = exact(getattr(request, f"{dimension}_demand"))
    load = state.allocated_exact(request.target, dimension) + demand
    if capacity == 0:
        return Fraction(0) if load == 0 else Fraction(2)
    return load / capacity


def realistic_score(request: Request, compute_state: ComputeState) -> float:
    """
    Product of per-dimension headroom memberships after admission.

    :param request: The request.
    :type request: Request
    :param compute_state: Current allocations.
    :type compute_state: ComputeState
    :return: Score in [0, 1].
    :rtype: float
    """
    score = Fraction(1)
    for dimension in RESOURCE_DIMENSIONS:
        membership = 1 - _projected(request, compute_state, dimension)
        score *= min(max(membership, Fraction(0)), Fraction(1))
    return float(score)


def realistic_admit(
    request: Request, compute_state: ComputeState, params: RealisticParams
) -> ResourceVerdict:
    """
    Product-logic admission.

    Admits when the headroom score reaches ``theta`` and no dimension would
    exceed capacity. A request demanding nothing adds no load and is
    admitted on any host that is not already over capacity.

    :param request: The request.
    :type request: Request
    :param compute_state: Current allocations.
    :type compute_state: ComputeState
    :param params: Threshold.
    :type params: RealisticParams
    :return: :data:`SUFFICIENT` or :class:`BelowAdmissionThreshold`.
    :rtype: Sufficient | BelowAdmissionThreshold
    :raises UnknownNode: If the target is not a tracked host.
    """
    if request.target not in compute_state:
        raise UnknownNode(request.target)
    projected = [
        _projected(request, compute_state, d) for d in RESOURCE_DIMENSIONS
    ]
    score = realistic_score(request, compute_state)
    if any(u > 1 for u in projected):
        return BelowAdmissionThreshold(score)
    demands_nothing = all(
        getattr(request, f"{d}_demand") == 0 for d in RESOURCE_DIMENSIONS
    )
    if demands_nothing or score >= params.theta:
        return SUFFICIENT
    return BelowAdmissionThreshold(score)


def capacity_aware_admit(
    request: Request, compute_state: ComputeState, params: CapacityAwareParams
) -> ResourceVerdict:
    """
    Risk-inflated capacity admission.

    :param request: The request.
    :type request: Request
    :param compute_state: Current allocations.
    :type compute_state: ComputeState
    :param params: Risk factors for cpu and io.
    :type params: CapacityAwareParams
    :return: :data:`SUFFICIENT`, or the first failing dimension in cpu, io,
        mem order.
    :rtype: Sufficient | InsufficientResources
    :raises UnknownNode: If the target is not a tracked host.
    """
    if request.target not in compute_state:
        raise UnknownNode(request.target)
    factors = (
        ("cpu", exact(params.risk_cpu)),
        ("io", exact(params.risk_io)),
        ("mem", Fraction(1)),
    )
    for dimension, factor in factors:
        demand = exact(getattr(request, f"{dimension}_demand")) * factor
        if compute_state.free_exact(request.target, dimension) < demand:
            return InsufficientResources(dimension)
    return SUFFICIENT


def resource_gate_for(
    scheme: Scheme,
    realistic: Optional[RealisticParams] = None,
    capacity_aware: Optional[CapacityAwareParams] = None,
) -> ResourceGate:
    """
    The resource gate a scheme plugs into the pipeline.

    :param scheme: The scheme.
    :type scheme: Scheme
    :return: Callable with the signature of
        :func:`topoman.admission.check_resources`.
    :rtype: Callable
    """
    if scheme is Scheme.REALISTIC:
        params = realistic or RealisticParams()
        return lambda request, state, _topology: realistic_admit(
            request, state, params
        )
    if scheme is Scheme.CAPACITY_AWARE:
        risk = capacity_aware or CapacityAwareParams()
        return lambda request, state, _topology: capacity_aware_admit(
            request, state, risk
        )
    return check_resources


# Justification: same inputs as admit plus the scheme and its parameters.
# pylint: disable=too-many-positional-arguments
def baseline_pipeline(
    request: Request,
    scheme: Scheme,
    policy: SlaPolicy,
    compute_state: ComputeState,
    residuals: ResidualState,
    path_table: PathAllocationTable,
    topology: Topology,
    now: int,
    *,
    handler: Optional[ApplicationHandler] = None,
    graph: Optional[nx.MultiGraph] = None,
    realistic: Optional[RealisticParams] = None,
    capacity_aware: Optional[CapacityAwareParams] = None,
) -> AdmissionResult:
    """
    The admission pipeline with ``scheme``'s resource gate.

    With :attr:`Scheme.PROPOSED` this is exactly
    :func:`topoman.admission.admit`.

    :return: The decision and the resulting state.
    :rtype: AdmissionResult
    """
    return admit(
        request,
        policy,
        compute_state,
        residuals,
        path_table,
        topology,
        now,
        handler=handler,
        graph=graph,
        resource_gate=resource_gate_for(scheme, realistic, capacity_aware),
    )
