"""
Requests, leases and the decisions the admission pipeline emits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple, Union

from topoman.errors import InvalidRequest
from topoman.pce.model import NoFeasiblePath, Path
from topoman.sla import SlaViolation


@dataclass(frozen=True)
class Request:
    """
    A resource-and-path demand; the unit of admission.

    :ivar id: Unique request id.
    :ivar source: Node where traffic enters.
    :ivar destination: Node where traffic leaves.
    :ivar target: Compute host the job runs on.
    :ivar cpu_demand: Compute units.
    :ivar mem_demand: Memory units.
    :ivar io_demand: I/O units.
    :ivar bandwidth_demand: Bandwidth reserved along the path.
    :ivar duration: Lifetime in ticks, strictly positive.
    :ivar arrival_time: Tick the request arrives at.
    :ivar usage_fraction: Share of the granted CPU actually consumed.
    :ivar weight: Share weight under CPU contention.
    """

    id: str
    source: str
    destination: str
    target: str
    cpu_demand: float = 0.0
    mem_demand: float = 0.0
    io_demand: float = 0.0
    bandwidth_demand: float = 0.0
    duration: int = 1
    arrival_time: int = 0
    usage_fraction: float = 1.0
    weight: float = 1.0

    def __post_init__(self):
        for name in (
            "cpu_demand",
            "mem_demand",
            "io_demand",
            "bandwidth_demand",
        ):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0:
                raise InvalidRequest(
                    f"request {self.id!r}: {name} must be finite and >= 0"
                )
        if not isinstance(self.duration, int) or self.duration <= 0:
            raise InvalidRequest(
                f"request {self.id!r}: duration must be a positive integer"
            )
        if not isinstance(self.arrival_time, int) or self.arrival_time < 0:
            raise InvalidRequest(
                f"request {self.id!r}: arrival must be a tick >= 0"
            )
        if not 0 <= self.usage_fraction <= 1:
            raise InvalidRequest(
                f"request {self.id!r}: usage_fraction must be in [0, 1]"
            )
        if not self.weight > 0:
            raise InvalidRequest(f"request {self.id!r}: weight must be > 0")


@dataclass(frozen=True)
class Lease:
    """
    Resources held by an admitted request.

    :ivar request_id: The admitted request.
    :ivar target: Compute host holding cpu/mem/io.
    :ivar path: Path holding the bandwidth.
    :ivar cpu: Reserved compute units.
    :ivar mem: Reserved memory units.
    :ivar io: Reserved I/O units.
    :ivar bandwidth: Reserved bandwidth on every path link.
    :ivar start: Tick the lease began.
    :ivar end: Tick the lease expires; always after ``start``.
    :ivar usage_fraction: Share of the granted CPU actually consumed.
    :ivar weight: Share weight under CPU contention.
    """

    request_id: str
    target: str
    path: Path
    cpu: float
    mem: float
    io: float
    bandwidth: float
    start: int
    end: int
    usage_fraction: float = 1.0
    weight: float = 1.0

    @classmethod
    def for_request(cls, request: Request, path: Path, now: int) -> "Lease":
        """
        Lease reserving exactly what ``request`` asked for, from ``now``.

        :param request: The admitted request.
        :type request: Request
        :param path: Path chosen for it.
        :type path: Path
        :param now: Current tick.
        :type now: int
        :return: Lease instance.
        :rtype: Lease
        """
        return cls(
            request_id=request.id,
            target=request.target,
            path=path,
            cpu=request.cpu_demand,
            mem=request.mem_demand,
            io=request.io_demand,
            bandwidth=request.bandwidth_demand,
            start=now,
            end=now + request.duration,
            usage_fraction=request.usage_fraction,
            weight=request.weight,
        )


@dataclass(frozen=True)
class SlaBreach:
    """Rejection reason: the request broke its SLA."""

    violations: Tuple[SlaViolation, ...]

    code = "sla"

    def __str__(self) -> str:
        return "; ".join(str(v) for v in self.violations)


@dataclass(frozen=True)
class InsufficientResources:
    """Rejection reason: the target host lacks room in one dimension."""

    dimension: str

    code = "resources"

    def __str__(self) -> str:
        return f"insufficient {self.dimension}"


@dataclass(frozen=True)
class BelowAdmissionThreshold:
    """Rejection reason: a product-logic score fell short of its threshold."""

    score: float

    code = "threshold"

    def __str__(self) -> str:
        return f"score {self.score:.6g} below threshold"


RejectionReason = Union[
    SlaBreach, InsufficientResources, BelowAdmissionThreshold, NoFeasiblePath
]


def reason_code(reason: RejectionReason) -> str:
    """Short machine-readable name of a rejection reason."""
    if isinstance(reason, NoFeasiblePath):
        return "no-path"
    return reason.code


@dataclass(frozen=True)
class Admitted:
    """
    The request passed every gate.

    :ivar request_id: The request.
    :ivar path: Path chosen by path computation.
    :ivar lease: Resources granted.
    """

    request_id: str
    path: Path
    lease: Lease

    admitted = True


@dataclass(frozen=True)
class Rejected:
    """
    The request was turned away.

    :ivar request_id: The request.
    :ivar reason: Why.
    """

    request_id: str
    reason: RejectionReason

    admitted = False


AllocationDecision = Union[Admitted, Rejected]
