"""
Utilization samples and series.

CPU utilization measures what leases actually consume (effective share
times usage fraction); memory utilization measures what is reserved. The
asymmetry is deliberate: granted CPU is not consumed CPU, while memory is
mapped at its real value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Tuple

from topoman.admission.state import ComputeState
from topoman.errors import ConservationError
from topoman.fairshare import UsageModel, usage
from topoman.pce.model import ResidualState
from topoman.topology.model import Topology


@dataclass(frozen=True)
class UtilizationSample:
    """
    Utilization at one tick.

    :ivar tick: Simulation tick.
    :ivar cpu: Consumed CPU over total CPU capacity, in [0, 1].
    :ivar mem: Reserved memory over total memory capacity, in [0, 1].
    :ivar overall: Mean of ``cpu`` and ``mem``.
    """

    tick: int
    cpu: float
    mem: float
    overall: float

    @classmethod
    def of(cls, tick: int, cpu: float, mem: float) -> "UtilizationSample":
        """Sample with ``overall`` derived from ``cpu`` and ``mem``."""
        cpu = _unit(cpu)
        mem = _unit(mem)
        return cls(tick, cpu, mem, (cpu + mem) / 2)


def _unit(value: float) -> float:
    # Total capacity is itself a float sum.
    return min(max(value, 0.0), 1.0)


@dataclass
class UtilizationSeries:
    """
    Samples of one run in tick order.

    :ivar scheme: Label of the scheme that produced the run.
    :ivar samples: Samples with strictly increasing ticks.
    """

    scheme: str
    samples: List[UtilizationSample] = field(default_factory=list)

    def append(self, item: UtilizationSample) -> None:
        """
        Add a sample after the last one.

        :raises ValueError: If the tick does not increase.
        """
        if self.samples and item.tick <= self.samples[-1].tick:
            raise ValueError(
                f"tick {item.tick} does not follow {self.samples[-1].tick}"
            )
        self.samples.append(item)

    def ticks(self) -> Tuple[int, ...]:
        """The tick grid."""
        return tuple(s.tick for s in self.samples)

    def __len__(self) -> int:
        return len(self.samples)

    def __iter__(self):
        return iter(self.samples)


# Justification: the sample draws on every piece of run state.
# pylint: disable=too-many-positional-arguments
def sample(
    compute_state: ComputeState,
    residuals: ResidualState,
    shares: Mapping[str, float],
    usage_model: Optional[UsageModel],
    topology: Topology,
    tick: int,
) -> UtilizationSample:
    """
    Measure utilization at ``tick``.

    :param compute_state: Current allocations.
    :type compute_state: ComputeState
    :param residuals: Current link residuals.
    :type residuals: ResidualState
    :param shares: Effective CPU share per active lease.
    :type shares: Mapping[str, float]
    :param usage_model: Usage fraction per lease; 1 when missing.
    :type usage_model: Mapping[str, float] | None
    :param topology: The topology; supplies total capacity.
    :type topology: Topology
    :param tick: Current tick.
    :type tick: int
    :return: The sample.
    :rtype: UtilizationSample
    :raises ConservationError: If any host or link is over capacity.
    """
    check_conservation(compute_state, residuals)
    capacity = topology.total_capacity()
    allocated, _ = compute_state.totals()
    consumed = math.fsum(usage(shares, usage_model).values())
    cpu = consumed / capacity.cpu if capacity.cpu > 0 else 0.0
    mem = allocated.mem / capacity.mem if capacity.mem > 0 else 0.0
    return UtilizationSample.of(tick, cpu, mem)


def check_conservation(
    compute_state: ComputeState, residuals: ResidualState
) -> None:
    """
    Assert allocations and reservations are within capacity.

    :raises ConservationError: On the first host or link found over.
    """
    if not compute_state.within_capacity():
        raise ConservationError("a host is allocated beyond its capacity")
    for link_id, capacity in residuals.capacities.items():
        reserved = residuals.reserved[link_id]
        if not 0 <= reserved <= capacity:
            raise ConservationError(
                f"link {link_id!r} reserved {float(reserved):g} of "
                f"{float(capacity):g}"
            )


def pool_utilization(
    topology: Topology,
    compute_state: ComputeState,
    host_cpu_usage: Mapping[str, float],
) -> Dict[str, Dict[str, float]]:
    """
    CPU and memory utilization per resource pool.

    :param topology: The topology.
    :type topology: Topology
    :param compute_state: Current allocations.
    :type compute_state: ComputeState
    :param host_cpu_usage: Consumed CPU per host id.
    :type host_cpu_usage: Mapping[str, float]
    :return: ``{pool_id: {"cpu": ..., "mem": ...}}`` sorted by pool id.
    :rtype: dict
    """
    result = {}
    for pool in sorted(topology.pools, key=lambda p: p.id):
        capacity = topology.members_capacity(pool)
        cpu_used = sum(host_cpu_usage.get(m, 0.0) for m in pool.members)
        mem_used = sum(
            compute_state.allocated_on(m).mem for m in pool.members
        )
        result[pool.id] = {
            "cpu": _unit(cpu_used / capacity.cpu) if capacity.cpu else 0.0,
            "mem": _unit(mem_used / capacity.mem) if capacity.mem else 0.0,
        }
    return result
