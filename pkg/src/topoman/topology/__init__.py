"""
Topology model, loader and routing view.
"""

from topoman.topology.builder import build_datacenter
from topoman.topology.graph import routing_graph
from topoman.topology.loader import (
    dump_topology,
    load_topology,
    parse_topology,
    validate,
)
from topoman.topology.model import (
    Capacity,
    Link,
    Node,
    NodeKind,
    ResourcePool,
    Topology,
    Violation,
)

__all__ = [
    "Capacity",
    "Link",
    "Node",
    "NodeKind",
    "ResourcePool",
    "Topology",
    "Violation",
    "build_datacenter",
    "dump_topology",
    "load_topology",
    "parse_topology",
    "routing_graph",
    "validate",
]
