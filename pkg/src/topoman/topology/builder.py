"""
Deterministic builder for hierarchical data-center fabrics.
"""

from __future__ import annotations

from typing import List

from topoman.topology.model import (
    Capacity,
    Link,
    Node,
    NodeKind,
    ResourcePool,
    Topology,
)


# Justification: the fabric shape genuinely has this many knobs.
# pylint: disable=too-many-arguments,too-many-locals
def build_datacenter(
    zones: int = 1,
    blocks_per_zone: int = 2,
    servers_per_block: int = 1,
    nodes_per_server: int = 2,
    node_capacity: Capacity = Capacity(16, 32, 16),
    server_capacity: Capacity = Capacity(4, 8, 4),
    host_bandwidth: float = 100.0,
    uplink_bandwidth: float = 400.0,
    host_latency: float = 1.0,
    uplink_latency: float = 2.0,
) -> Topology:
    """
    Build a zone/block/server/node hierarchy with a two-tier switch fabric.

    Every zone gets a core switch; every block a top-of-rack switch linked to
    its zone's core. Servers and their compute nodes attach to the block's
    ToR. Each block's hosts form one resource pool. Zone cores are chained
    together so the whole fabric is connected.

    :param zones: Number of zones.
    :type zones: int
    :param blocks_per_zone: Blocks under each zone.
    :type blocks_per_zone: int
    :param servers_per_block: Servers under each block.
    :type servers_per_block: int
    :param nodes_per_server: Compute nodes under each server.
    :type nodes_per_server: int
    :return: A topology that validates.
    :rtype: Topology
    """
    nodes: List[Node] = []
    links: List[Link] = []
    pools: List[ResourcePool] = []

    def connect(a: str, b: str, bandwidth: float, latency: float) -> None:
        links.append(Link(f"{a}~{b}", a, b, bandwidth, latency))

    previous_core = None
    for z in range(zones):
        zone = f"z{z}"
        core = f"{zone}-core"
        nodes.append(Node(zone, NodeKind.ZONE))
        nodes.append(Node(core, NodeKind.SWITCH, zone))
        if previous_core is not None:
            connect(previous_core, core, uplink_bandwidth, uplink_latency)
        previous_core = core
        for b in range(blocks_per_zone):
            block = f"{zone}-b{b}"
            tor = f"{block}-tor"
            nodes.append(Node(block, NodeKind.BLOCK, zone))
            nodes.append(Node(tor, NodeKind.SWITCH, block))
            connect(tor, core, uplink_bandwidth, uplink_latency)
            members = []
            for s in range(servers_per_block):
                server = f"{block}-s{s}"
                nodes.append(
                    Node(server, NodeKind.SERVER, block, server_capacity)
                )
                connect(server, tor, host_bandwidth, host_latency)
                members.append(server)
                for n in range(nodes_per_server):
                    host = f"{server}-n{n}"
                    nodes.append(
                        Node(
                            host, NodeKind.COMPUTE_NODE, server, node_capacity
                        )
                    )
                    connect(host, tor, host_bandwidth, host_latency)
                    members.append(host)
            pools.append(ResourcePool(f"{block}-pool", tuple(sorted(members))))
    return Topology(nodes, links, pools)
