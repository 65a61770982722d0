"""
Hierarchical data-center topology model.

Nodes are organised into zones, blocks, servers and compute nodes, with
switches carrying traffic between them. Capacities are expressed in three
dimensions (cpu, mem, io); links carry bandwidth and latency.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, Iterator, Mapping, Optional, Tuple

from topoman.errors import UnknownNode, UnknownPool


class NodeKind(str, Enum):
    """Kinds of node in the hierarchy."""

    ZONE = "Zone"
    BLOCK = "Block"
    SERVER = "Server"
    COMPUTE_NODE = "ComputeNode"
    SWITCH = "Switch"

    @property
    def is_grouping(self) -> bool:
        """Zone and Block only group other nodes."""
        return self in (NodeKind.ZONE, NodeKind.BLOCK)

    @property
    def is_compute(self) -> bool:
        """Server and ComputeNode host jobs and carry capacity."""
        return self in (NodeKind.SERVER, NodeKind.COMPUTE_NODE)

    @property
    def is_routable(self) -> bool:
        """Whether the node takes part in the routing graph."""
        return not self.is_grouping


# Allowed parent kinds per child kind.
ALLOWED_PARENTS: Dict[NodeKind, Tuple[NodeKind, ...]] = {
    NodeKind.ZONE: (),
    NodeKind.BLOCK: (NodeKind.ZONE,),
    NodeKind.SERVER: (NodeKind.BLOCK, NodeKind.ZONE),
    NodeKind.COMPUTE_NODE: (NodeKind.SERVER, NodeKind.BLOCK, NodeKind.ZONE),
    NodeKind.SWITCH: (NodeKind.BLOCK, NodeKind.ZONE),
}

RESOURCE_DIMENSIONS: Tuple[str, ...] = ("cpu", "mem", "io")


@dataclass(frozen=True)
class Capacity:
    """
    A cpu/mem/io triple.

    :ivar cpu: Compute units.
    :ivar mem: Memory units.
    :ivar io: I/O units.
    """

    cpu: float = 0.0
    mem: float = 0.0
    io: float = 0.0

    def __add__(self, other: "Capacity") -> "Capacity":
        return Capacity(
            self.cpu + other.cpu, self.mem + other.mem, self.io + other.io
        )

    def __sub__(self, other: "Capacity") -> "Capacity":
        return Capacity(
            self.cpu - other.cpu, self.mem - other.mem, self.io - other.io
        )

    def is_zero(self) -> bool:
        """True when every dimension is exactly 0."""
        return self.cpu == 0 and self.mem == 0 and self.io == 0

    def to_dict(self) -> dict:
        """Dictionary form keyed by dimension name."""
        return {"cpu": self.cpu, "mem": self.mem, "io": self.io}


@dataclass(frozen=True)
class Node:
    """
    A node of the topology.

    :ivar id: Unique identifier.
    :ivar kind: The node's kind.
    :ivar parent: Id of the enclosing grouping node, if any.
    :ivar capacity: Compute capacity; zero for grouping nodes and switches.
    """

    id: str
    kind: NodeKind
    parent: Optional[str] = None
    capacity: Capacity = field(default_factory=Capacity)

    @property
    def cpu_capacity(self) -> float:
        """Compute units."""
        return self.capacity.cpu

    @property
    def mem_capacity(self) -> float:
        """Memory units."""
        return self.capacity.mem

    @property
    def io_capacity(self) -> float:
        """I/O units."""
        return self.capacity.io


@dataclass(frozen=True)
class Link:
    """
    An undirected link between two routable nodes.

    :ivar id: Unique identifier.
    :ivar a: One endpoint.
    :ivar b: The other endpoint.
    :ivar bandwidth_capacity: Bandwidth units, strictly positive.
    :ivar latency: Time units, non-negative.
    """

    id: str
    a: str
    b: str
    bandwidth_capacity: float
    latency: float = 0.0

    @property
    def endpoints(self) -> frozenset:
        """The unordered endpoint pair."""
        return frozenset((self.a, self.b))

    def other(self, node_id: str) -> str:
        """
        The endpoint opposite ``node_id``.

        :param node_id: One of the link's endpoints.
        :type node_id: str
        :return: The other endpoint.
        :rtype: str
        """
        if node_id == self.a:
            return self.b
        if node_id == self.b:
            return self.a
        raise UnknownNode(node_id)


@dataclass(frozen=True)
class ResourcePool:
    """
    A named set of compute hosts.

    Aggregate capacity is never stored; ask the topology for it with
    :meth:`Topology.pool_capacity`.

    :ivar id: Unique identifier.
    :ivar members: Ids of member Server/ComputeNode nodes.
    """

    id: str
    members: Tuple[str, ...] = ()

    def with_member(self, node_id: str) -> "ResourcePool":
        """Copy of the pool with ``node_id`` added (no-op if present)."""
        if node_id in self.members:
            return self
        return ResourcePool(self.id, tuple(sorted((*self.members, node_id))))

    def without_member(self, node_id: str) -> "ResourcePool":
        """Copy of the pool with ``node_id`` removed (no-op if absent)."""
        return ResourcePool(
            self.id, tuple(m for m in self.members if m != node_id)
        )


@dataclass(frozen=True)
class Violation:
    """
    One broken topology invariant.

    :ivar element: Id of the offending node, link or pool.
    :ivar rule: Short rule name, e.g. ``dangling-reference``.
    :ivar message: Human-readable detail.
    """

    element: str
    rule: str
    message: str

    def __str__(self) -> str:
        return f"{self.element}: {self.rule} ({self.message})"


class Topology:
    """
    The directory of overall network mappings.

    Immutable once built; safe to share between concurrent runs.

    :param nodes: All nodes.
    :type nodes: Iterable[Node]
    :param links: All links.
    :type links: Iterable[Link]
    :param pools: All resource pools.
    :type pools: Iterable[ResourcePool]
    """

    def __init__(
        self,
        nodes: Iterable[Node] = (),
        links: Iterable[Link] = (),
        pools: Iterable[ResourcePool] = (),
    ):
        self._nodes: Tuple[Node, ...] = tuple(nodes)
        self._links: Tuple[Link, ...] = tuple(links)
        self._pools: Tuple[ResourcePool, ...] = tuple(pools)
        self._node_index: Dict[str, Node] = {n.id: n for n in self._nodes}
        self._pool_index: Dict[str, ResourcePool] = {
            p.id: p for p in self._pools
        }

    @property
    def nodes(self) -> Tuple[Node, ...]:
        """Nodes in document order."""
        return self._nodes

    @property
    def links(self) -> Tuple[Link, ...]:
        """Links in document order."""
        return self._links

    @property
    def pools(self) -> Tuple[ResourcePool, ...]:
        """Pools in document order."""
        return self._pools

    def has_node(self, node_id: str) -> bool:
        """Whether ``node_id`` resolves."""
        return node_id in self._node_index

    def node(self, node_id: str) -> Node:
        """
        Look up a node.

        :param node_id: The node id.
        :type node_id: str
        :return: The node.
        :rtype: Node
        :raises UnknownNode: If the id does not resolve.
        """
        try:
            return self._node_index[node_id]
        except KeyError:
            raise UnknownNode(node_id) from None

    def pool(self, pool_id: str) -> ResourcePool:
        """
        Look up a pool by id.

        :raises UnknownPool: If the id does not resolve.
        """
        try:
            return self._pool_index[pool_id]
        except KeyError:
            raise UnknownPool(pool_id) from None

    def compute_nodes(self) -> Iterator[Node]:
        """Server and ComputeNode nodes sorted by id."""
        return iter(
            sorted(
                (n for n in self._nodes if n.kind.is_compute),
                key=lambda n: n.id,
            )
        )

    def link_capacities(self) -> Mapping[str, float]:
        """Bandwidth capacity per link id."""
        return {lk.id: lk.bandwidth_capacity for lk in self._links}

    def total_capacity(self) -> Capacity:
        """Sum of capacities over every compute host."""
        total = Capacity()
        for node in self.compute_nodes():
            total = total + node.capacity
        return total

    def pool_capacity(self, pool_id: str) -> Capacity:
        """
        Aggregate capacity of a pool, recomputed from its members.

        :param pool_id: The pool id.
        :type pool_id: str
        :return: Sum of member capacities.
        :rtype: Capacity
        """
        return self.members_capacity(self.pool(pool_id))

    def members_capacity(self, pool: ResourcePool) -> Capacity:
        """Sum of capacities of ``pool``'s members as they resolve here."""
        total = Capacity()
        for member in pool.members:
            total = total + self.node(member).capacity
        return total

    def ancestors(self, node_id: str) -> Tuple[Node, ...]:
        """
        Parent chain of a node, nearest first.

        Stops early on a cycle so it is safe on unvalidated topologies.
        """
        chain = []
        seen = {node_id}
        current = self.node(node_id).parent
        while current is not None and current in self._node_index:
            if current in seen:
                break
            seen.add(current)
            parent = self._node_index[current]
            chain.append(parent)
            current = parent.parent
        return tuple(chain)

    def directory(self) -> dict:
        """
        Directory of network mappings.

        :return: Per compute host its location in the hierarchy and its
            capacity, per pool its members and aggregate capacity.
        :rtype: dict
        """
        hosts = {}
        for node in self.compute_nodes():
            location = {kind.value.lower(): None for kind in _LOCATION_KINDS}
            for ancestor in self.ancestors(node.id):
                key = ancestor.kind.value.lower()
                if key in location and location[key] is None:
                    location[key] = ancestor.id
            hosts[node.id] = {
                "kind": node.kind.value,
                **location,
                "capacity": node.capacity.to_dict(),
            }
        pools = {
            pool.id: {
                "members": list(pool.members),
                "capacity": self.members_capacity(pool).to_dict(),
            }
            for pool in sorted(self._pools, key=lambda p: p.id)
        }
        return {"hosts": hosts, "pools": pools}

    def __repr__(self) -> str:
        return (
            f"Topology(nodes={len(self._nodes)}, links={len(self._links)}, "
            f"pools={len(self._pools)})"
        )


_LOCATION_KINDS = (NodeKind.ZONE, NodeKind.BLOCK, NodeKind.SERVER)
