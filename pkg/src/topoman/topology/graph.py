"""
Routing substrate over the topology.
"""

from __future__ import annotations

import networkx as nx

from topoman.topology.model import Topology


def routing_graph(topology: Topology) -> nx.MultiGraph:
    """
    Adjacency view over routable nodes and all links.

    Grouping nodes (zones, blocks) are left out. Nodes are inserted sorted by
    id and links sorted by id, so iteration order is stable across calls.
    Each edge is keyed by its link id and carries ``bandwidth`` and
    ``latency`` attributes.

    :param topology: A validated topology.
    :type topology: Topology
    :return: A frozen multigraph.
    :rtype: networkx.MultiGraph
    """
    graph = nx.MultiGraph()
    for node in sorted(topology.nodes, key=lambda n: n.id):
        if node.kind.is_routable:
            graph.add_node(node.id, kind=node.kind.value)
    for link in sorted(topology.links, key=lambda lk: lk.id):
        graph.add_edge(
            link.a,
            link.b,
            key=link.id,
            bandwidth=link.bandwidth_capacity,
            latency=link.latency,
        )
    return nx.freeze(graph)
