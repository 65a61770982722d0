"""
Per-host compute bookkeeping.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Tuple

from topoman.errors import ConservationError, UnknownNode
from topoman.pce.model import Number, exact
from topoman.topology.model import RESOURCE_DIMENSIONS, Capacity, Topology

Amounts = Tuple[Fraction, Fraction, Fraction]

_ZERO: Amounts = (Fraction(0), Fraction(0), Fraction(0))


def _amounts(cpu: Number, mem: Number, io: Number) -> Amounts:
    return (exact(cpu), exact(mem), exact(io))


def _as_capacity(amounts: Amounts) -> Capacity:
    return Capacity(*(float(a) for a in amounts))


def _column_sums(rows: Iterable[Amounts]) -> Amounts:
    cpu, mem, io = _ZERO
    for row in rows:
        cpu, mem, io = cpu + row[0], mem + row[1], io + row[2]
    return (cpu, mem, io)


@dataclass(frozen=True)
class ComputeState:
    """
    Allocated cpu/mem/io per compute host.

    Immutable; :meth:`allocate` and :meth:`deallocate` return new states.
    Amounts are exact rationals so allocation followed by deallocation is
    an exact round trip.

    :ivar capacities: Capacity per host id.
    :ivar allocated: Allocated totals per host id.
    """

    capacities: Mapping[str, Amounts] = field(default_factory=dict)
    allocated: Mapping[str, Amounts] = field(default_factory=dict)

    @classmethod
    def from_topology(cls, topology: Topology) -> "ComputeState":
        """
        A fresh state covering every Server and ComputeNode.

        :param topology: The topology.
        :type topology: Topology
        :return: ComputeState instance with nothing allocated.
        :rtype: ComputeState
        """
        capacities = {
            node.id: _amounts(
                node.cpu_capacity, node.mem_capacity, node.io_capacity
            )
            for node in topology.compute_nodes()
        }
        return cls(capacities, {k: _ZERO for k in capacities})

    def __contains__(self, node_id: str) -> bool:
        return node_id in self.capacities

    def hosts(self) -> Tuple[str, ...]:
        """Host ids in sorted order."""
        return tuple(self.capacities)

    def _require(self, node_id: str) -> None:
        if node_id not in self.capacities:
            raise UnknownNode(node_id)

    def capacity_of(self, node_id: str) -> Capacity:
        """Capacity of a host."""
        self._require(node_id)
        return _as_capacity(self.capacities[node_id])

    def allocated_on(self, node_id: str) -> Capacity:
        """
        Allocated totals on a host.

        :param node_id: Host id.
        :type node_id: str
        :return: Allocated cpu/mem/io.
        :rtype: Capacity
        :raises UnknownNode: If the host is not tracked.
        """
        self._require(node_id)
        return _as_capacity(self.allocated[node_id])

    def free_exact(self, node_id: str, dimension: str) -> Fraction:
        """Exact capacity minus allocation in one dimension."""
        self._require(node_id)
        i = RESOURCE_DIMENSIONS.index(dimension)
        return self.capacities[node_id][i] - self.allocated[node_id][i]

    def capacity_exact(self, node_id: str, dimension: str) -> Fraction:
        """Exact capacity in one dimension."""
        self._require(node_id)
        return self.capacities[node_id][RESOURCE_DIMENSIONS.index(dimension)]

    def allocated_exact(self, node_id: str, dimension: str) -> Fraction:
        """Exact allocation in one dimension."""
        self._require(node_id)
        return self.allocated[node_id][RESOURCE_DIMENSIONS.index(dimension)]

    def allocate(
        self, node_id: str, cpu: Number, mem: Number, io: Number
    ) -> "ComputeState":
        """
        Add an allocation to a host.

        :raises ConservationError: If any dimension would exceed capacity.
        """
        self._require(node_id)
        current = self.allocated[node_id]
        updated = tuple(
            a + d for a, d in zip(current, _amounts(cpu, mem, io))
        )
        for dim, used, cap in zip(
            RESOURCE_DIMENSIONS, updated, self.capacities[node_id]
        ):
            if used > cap:
                raise ConservationError(
                    f"{node_id}: {dim} allocation {float(used):g} exceeds "
                    f"capacity {float(cap):g}"
                )
        return self._with(node_id, updated)  # type: ignore[arg-type]

    def deallocate(
        self, node_id: str, cpu: Number, mem: Number, io: Number
    ) -> "ComputeState":
        """
        Remove an allocation from a host.

        :raises ConservationError: If any dimension would drop below zero.
        """
        self._require(node_id)
        current = self.allocated[node_id]
        updated = tuple(
            a - d for a, d in zip(current, _amounts(cpu, mem, io))
        )
        if any(u < 0 for u in updated):
            raise ConservationError(f"{node_id}: allocation below zero")
        return self._with(node_id, updated)  # type: ignore[arg-type]

    def _with(self, node_id: str, amounts: Amounts) -> "ComputeState":
        allocated: Dict[str, Amounts] = dict(self.allocated)
        allocated[node_id] = amounts
        return ComputeState(self.capacities, allocated)

    def totals(self) -> Tuple[Capacity, Capacity]:
        """
        Summed (allocated, capacity) over every host.

        :return: Allocated totals and capacity totals.
        :rtype: tuple[Capacity, Capacity]
        """
        allocated = _column_sums(self.allocated.values())
        capacity = _column_sums(self.capacities.values())
        return _as_capacity(allocated), _as_capacity(capacity)

    def within_capacity(self) -> bool:
        """Whether every host respects its capacity in every dimension."""
        return all(
            0 <= used <= cap
            for node_id, caps in self.capacities.items()
            for used, cap in zip(self.allocated[node_id], caps)
        )
