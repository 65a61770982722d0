"""
Path computation over the routing graph.

Paths are ranked by total latency, then hop count, then the link-id
sequence compared lexicographically. The search is best-first over simple
paths keyed by exactly that triple; extending a path strictly increases its
key, so the first path popped at the destination is the optimum.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import replace
from fractions import Fraction
from typing import Dict, FrozenSet, List, Set, Tuple

import networkx as nx

from topoman.errors import InsufficientBandwidth, OverRelease, UnknownNode
from topoman.pce.model import (
    NoFeasiblePath,
    Number,
    Path,
    PathConstraints,
    PathResult,
    ResidualState,
    exact,
)

# Slack for comparing latency lower bounds summed in a different order.
_BOUND_SLACK = 1e-9


def compute_path(
    graph: nx.MultiGraph,
    residuals: ResidualState,
    src: str,
    dst: str,
    constraints: PathConstraints,
) -> PathResult:
    """
    Find the best feasible simple path from ``src`` to ``dst``.

    A link is usable when its residual bandwidth is at least
    ``constraints.min_residual_bandwidth``. Among simple paths over usable
    links that satisfy ``max_latency`` and ``max_hops``, the one with the
    lowest latency wins, then the fewest hops, then the lexicographically
    smallest link-id sequence.

    :param graph: Routing view from :func:`topoman.topology.routing_graph`.
    :type graph: networkx.MultiGraph
    :param residuals: Current per-link residuals.
    :type residuals: ResidualState
    :param src: Source node id.
    :type src: str
    :param dst: Destination node id.
    :type dst: str
    :param constraints: Feasibility bounds.
    :type constraints: PathConstraints
    :return: The chosen path, or :class:`NoFeasiblePath`.
    :rtype: Path | NoFeasiblePath
    :raises UnknownNode: If ``src`` or ``dst`` is not in the graph.
    """
    for node_id in (src, dst):
        if node_id not in graph:
            raise UnknownNode(node_id)
    if src == dst:
        return Path(src, dst, (), (src,), 0.0)

    min_bw = exact(constraints.min_residual_bandwidth)

    def usable(_u, _v, key) -> bool:
        return residuals.residual_exact(key) >= min_bw

    view = nx.subgraph_view(graph, filter_edge=usable)
    latency_bound = nx.single_source_dijkstra_path_length(
        view, dst, weight="latency"
    )
    if src not in latency_bound:
        return NoFeasiblePath(src, dst)
    hop_bound = nx.single_source_shortest_path_length(view, dst)

    max_latency = constraints.max_latency
    max_hops = constraints.max_hops
    latency_cap = (
        None
        if max_latency is None
        else max_latency + _BOUND_SLACK * max(1.0, abs(max_latency))
    )

    # (latency, hops, link ids, node ids, visited)
    start: Tuple[float, int, Tuple[str, ...], Tuple[str, ...], FrozenSet]
    start = (0.0, 0, (), (src,), frozenset((src,)))
    frontier = [start]
    settled: Set[Tuple[str, FrozenSet]] = set()

    while frontier:
        latency, hops, link_ids, node_ids, visited = heapq.heappop(frontier)
        node = node_ids[-1]
        if node == dst:
            if max_latency is not None and latency > max_latency:
                return NoFeasiblePath(src, dst)
            return Path(
                src,
                dst,
                link_ids,
                node_ids,
                latency,
                _bottleneck(residuals, link_ids),
            )
        state = (node, visited)
        if state in settled:
            continue
        settled.add(state)

        for _, neighbor, key, data in _edges(view, node):
            if neighbor in visited or neighbor not in latency_bound:
                continue
            next_latency = latency + data["latency"]
            next_hops = hops + 1
            if (
                latency_cap is not None
                and next_latency + latency_bound[neighbor] > latency_cap
            ):
                continue
            if (
                max_hops is not None
                and next_hops + hop_bound[neighbor] > max_hops
            ):
                continue
            heapq.heappush(
                frontier,
                (
                    next_latency,
                    next_hops,
                    link_ids + (key,),
                    node_ids + (neighbor,),
                    visited | {neighbor},
                ),
            )
    return NoFeasiblePath(src, dst)


def _edges(view, node: str) -> List[Tuple[str, str, str, dict]]:
    return sorted(
        view.edges(node, keys=True, data=True), key=lambda edge: edge[2]
    )


def _bottleneck(residuals: ResidualState, link_ids: Tuple[str, ...]) -> float:
    if not link_ids:
        return math.inf
    return float(min(residuals.residual_exact(k) for k in link_ids))


def is_feasible(
    path: Path, residuals: ResidualState, constraints: PathConstraints
) -> bool:
    """
    Whether a previously computed path still satisfies ``constraints``.

    :param path: The path to recheck.
    :type path: Path
    :param residuals: Current residuals.
    :type residuals: ResidualState
    :param constraints: The bounds to check against.
    :type constraints: PathConstraints
    :return: True if every link has room and the static bounds hold.
    :rtype: bool
    """
    if (
        constraints.max_latency is not None
        and path.total_latency > constraints.max_latency
    ):
        return False
    max_hops = constraints.max_hops
    if max_hops is not None and path.hop_count > max_hops:
        return False
    return all(
        residuals.has_room(k, constraints.min_residual_bandwidth)
        for k in path.links
    )


def refresh(path: Path, residuals: ResidualState) -> Path:
    """Copy of ``path`` with its bottleneck recomputed from ``residuals``."""
    return replace(
        path, bottleneck_bandwidth=_bottleneck(residuals, path.links)
    )


def reserve(
    residuals: ResidualState, path: Path, bandwidth: Number
) -> ResidualState:
    """
    Reserve ``bandwidth`` on every link of ``path``.

    :param residuals: Current residuals.
    :type residuals: ResidualState
    :param path: Path whose links are reserved.
    :type path: Path
    :param bandwidth: Amount to reserve on each link.
    :type bandwidth: float
    :return: The updated residuals; other links are untouched.
    :rtype: ResidualState
    :raises InsufficientBandwidth: If any link lacks room; nothing changes.
    """
    amount = exact(bandwidth)
    if amount < 0:
        raise InsufficientBandwidth(f"cannot reserve {bandwidth} < 0")
    updates: Dict[str, Fraction] = {}
    for link_id in path.links:
        if residuals.residual_exact(link_id) < amount:
            raise InsufficientBandwidth(
                f"link {link_id!r} has {residuals.residual(link_id):g} "
                f"left, {float(amount):g} requested"
            )
        updates[link_id] = residuals.reserved[link_id] + amount
    return residuals.with_reserved(updates)


def release(
    residuals: ResidualState, path: Path, bandwidth: Number
) -> ResidualState:
    """
    Give ``bandwidth`` back on every link of ``path``.

    :param residuals: Current residuals.
    :type residuals: ResidualState
    :param path: Path whose links are released.
    :type path: Path
    :param bandwidth: Amount to release on each link.
    :type bandwidth: float
    :return: The updated residuals.
    :rtype: ResidualState
    :raises OverRelease: If a residual would exceed its capacity; nothing
        changes.
    """
    amount = exact(bandwidth)
    if amount < 0:
        raise OverRelease(f"cannot release {bandwidth} < 0")
    updates: Dict[str, Fraction] = {}
    for link_id in path.links:
        remaining = residuals.reserved[link_id] - amount
        if remaining < 0:
            raise OverRelease(
                f"link {link_id!r}: releasing {float(amount):g} would exceed "
                f"capacity {float(residuals.capacities[link_id]):g}"
            )
        updates[link_id] = remaining
    return residuals.with_reserved(updates)
