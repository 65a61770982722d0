"""
SLA policies and the compliance check that opens the admission pipeline.

The factor set is a reconstruction: per-request demand caps on cpu, mem and
io, plus a path-latency bound that is handed on to path computation.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import TYPE_CHECKING, List, Optional

from topoman.errors import ConfigError

if TYPE_CHECKING:
    from topoman.admission.request import Request

# (policy field, request field, dimension name)
_DEMAND_CAPS = (
    ("max_cpu_demand", "cpu_demand", "cpu"),
    ("max_io_demand", "io_demand", "io"),
    ("max_mem_demand", "mem_demand", "mem"),
)


@dataclass(frozen=True)
class SlaPolicy:
    """
    SLA bounds a request must respect. ``None`` means unconstrained.

    :ivar max_path_latency: Upper bound on the chosen path's latency.
    :ivar min_bandwidth: Lower bound on bandwidth; informational, bandwidth
        feasibility is decided during path computation.
    :ivar max_cpu_demand: Cap on requested compute units.
    :ivar max_mem_demand: Cap on requested memory units.
    :ivar max_io_demand: Cap on requested I/O units.
    """

    max_path_latency: Optional[float] = None
    min_bandwidth: Optional[float] = None
    max_cpu_demand: Optional[float] = None
    max_mem_demand: Optional[float] = None
    max_io_demand: Optional[float] = None

    def __post_init__(self):
        for name, value in asdict(self).items():
            if value is None:
                continue
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ConfigError(f"sla.{name} must be a number")
            if math.isnan(value) or value < 0:
                raise ConfigError(f"sla.{name} must be >= 0, got {value}")

    def to_dict(self) -> dict:
        """
        Convert the policy to a dictionary, dropping absent bounds.

        :return: Dictionary representation of the policy.
        :rtype: dict
        """
        return {k: v for k, v in asdict(self).items() if v is not None}

    @classmethod
    def from_dict(cls, data: Optional[dict]) -> "SlaPolicy":
        """
        Create a policy from the scenario's ``sla`` object.

        :param data: Mapping with any of the five bound fields.
        :type data: dict | None
        :return: SlaPolicy instance.
        :rtype: SlaPolicy
        :raises ConfigError: On unknown keys or negative bounds.
        """
        data = dict(data or {})
        unknown = set(data) - set(cls.__dataclass_fields__)
        if unknown:
            raise ConfigError(f"unknown sla keys: {sorted(unknown)}")
        return cls(**data)


@dataclass(frozen=True)
class SlaViolation:
    """
    One SLA bound broken by a request.

    :ivar dimension: ``cpu``, ``mem`` or ``io``.
    :ivar bound: The policy's bound.
    :ivar offered: What the request asked for.
    """

    dimension: str
    bound: float
    offered: float

    def __str__(self) -> str:
        return f"{self.dimension} {self.offered:g} > {self.bound:g}"


def check_sla(request: "Request", policy: SlaPolicy) -> List[SlaViolation]:
    """
    Check a request's demands against the policy caps.

    Bandwidth and latency are not judged here; both become path
    constraints.

    :param request: The request to check.
    :type request: Request
    :param policy: The SLA in force.
    :type policy: SlaPolicy
    :return: Violations sorted by dimension name; empty when compliant.
    :rtype: list[SlaViolation]
    """
    violations = []
    for bound_field, demand_field, dimension in _DEMAND_CAPS:
        bound = getattr(policy, bound_field)
        if bound is None:
            continue
        offered = getattr(request, demand_field)
        if offered > bound:
            violations.append(SlaViolation(dimension, bound, offered))
    return violations
