"""
Topology document decoding and validation.

The document is UTF-8 JSON with top-level arrays ``nodes``, ``links`` and
``pools``. Field names are fixed so fixtures can be shared between
implementations.
"""

from __future__ import annotations

import json
import logging
import math
import os
from pathlib import Path
from typing import Any, Dict, List, Mapping, Union

from topoman.errors import ParseError, ValidationError
from topoman.topology.model import (
    ALLOWED_PARENTS,
    Capacity,
    Link,
    Node,
    NodeKind,
    ResourcePool,
    Topology,
    Violation,
)

logger = logging.getLogger(__name__)

TopologySource = Union[str, "os.PathLike[str]", Mapping[str, Any]]


def load_topology(source: TopologySource) -> Topology:
    """
    Load and validate a topology.

    :param source: Path to a topology JSON file, or an already decoded
        document.
    :type source: str | os.PathLike | Mapping
    :return: A topology satisfying every model invariant.
    :rtype: Topology
    :raises ParseError: If the document is malformed.
    :raises ValidationError: If the document breaks an invariant.
    """
    if isinstance(source, Mapping):
        document = source
    else:
        document = read_json(Path(source))
    topology = parse_topology(document)
    violations = validate(topology)
    if violations:
        raise ValidationError(violations)
    logger.info(f"loaded {topology!r}")
    return topology


def read_json(path: Path) -> Any:
    """
    Read a UTF-8 JSON file.

    :raises ParseError: If the file is not valid JSON.
    :raises FileNotFoundError: If the file does not exist.
    """
    try:
        with path.open("r", encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    except UnicodeDecodeError as exc:
        raise ParseError(f"{path}: not UTF-8 ({exc})") from exc


def parse_topology(document: Mapping[str, Any]) -> Topology:
    """
    Decode a topology document without checking cross-references.

    :param document: The decoded JSON object.
    :type document: Mapping
    :return: The topology as written.
    :rtype: Topology
    :raises ParseError: On missing fields or wrong types.
    """
    if not isinstance(document, Mapping):
        raise ParseError("topology document must be a JSON object")
    nodes = [
        _parse_node(item, i)
        for i, item in enumerate(_array(document, "nodes"))
    ]
    links = [
        _parse_link(item, i)
        for i, item in enumerate(_array(document, "links"))
    ]
    pools = [
        _parse_pool(item, i)
        for i, item in enumerate(_array(document, "pools"))
    ]
    return Topology(nodes, links, pools)


def dump_topology(topology: Topology) -> Dict[str, Any]:
    """Encode a topology back into the document format."""
    nodes: List[Dict[str, Any]] = []
    for node in topology.nodes:
        item: Dict[str, Any] = {"id": node.id, "kind": node.kind.value}
        if node.parent is not None:
            item["parent"] = node.parent
        item.update(node.capacity.to_dict())
        nodes.append(item)
    links = [
        {
            "id": link.id,
            "a": link.a,
            "b": link.b,
            "bw": link.bandwidth_capacity,
            "latency": link.latency,
        }
        for link in topology.links
    ]
    pools = [
        {"id": pool.id, "members": list(pool.members)}
        for pool in topology.pools
    ]
    return {"nodes": nodes, "links": links, "pools": pools}


def validate(topology: Topology) -> List[Violation]:
    """
    Check every topology invariant.

    :param topology: The topology to check.
    :type topology: Topology
    :return: One entry per broken rule, empty when the topology is valid.
    :rtype: list[Violation]
    """
    violations: List[Violation] = []
    violations.extend(_check_unique_ids(topology))
    violations.extend(_check_nodes(topology))
    violations.extend(_check_hierarchy(topology))
    violations.extend(_check_links(topology))
    violations.extend(_check_pools(topology))
    return violations


def _array(document: Mapping[str, Any], key: str) -> list:
    value = document.get(key, [])
    if not isinstance(value, list):
        raise ParseError(f"'{key}' must be an array")
    return value


def _require(item: Any, key: str, where: str) -> Any:
    if not isinstance(item, Mapping):
        raise ParseError(f"{where} must be an object")
    if key not in item:
        raise ParseError(f"{where} is missing '{key}'")
    return item[key]


def _number(item: Mapping[str, Any], key: str, where: str, default=None):
    value = item.get(key, default)
    if value is None:
        raise ParseError(f"{where} is missing '{key}'")
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"{where}: '{key}' must be a number")
    if not math.isfinite(value):
        raise ParseError(f"{where}: '{key}' must be finite")
    return float(value)


def _identifier(item: Mapping[str, Any], key: str, where: str) -> str:
    value = _require(item, key, where)
    if not isinstance(value, str) or not value:
        raise ParseError(f"{where}: '{key}' must be a non-empty string")
    return value


def _parse_node(item: Any, index: int) -> Node:
    where = f"nodes[{index}]"
    node_id = _identifier(item, "id", where)
    where = f"node {node_id!r}"
    raw_kind = _require(item, "kind", where)
    try:
        kind = NodeKind(raw_kind)
    except ValueError:
        raise ParseError(f"{where}: unknown kind {raw_kind!r}") from None
    parent = item.get("parent")
    if parent is not None and not isinstance(parent, str):
        raise ParseError(f"{where}: 'parent' must be a string")
    capacity = Capacity(
        cpu=_number(item, "cpu", where, 0),
        mem=_number(item, "mem", where, 0),
        io=_number(item, "io", where, 0),
    )
    return Node(node_id, kind, parent, capacity)


def _parse_link(item: Any, index: int) -> Link:
    where = f"links[{index}]"
    link_id = _identifier(item, "id", where)
    where = f"link {link_id!r}"
    return Link(
        id=link_id,
        a=_identifier(item, "a", where),
        b=_identifier(item, "b", where),
        bandwidth_capacity=_number(item, "bw", where),
        latency=_number(item, "latency", where, 0),
    )


def _parse_pool(item: Any, index: int) -> ResourcePool:
    where = f"pools[{index}]"
    pool_id = _identifier(item, "id", where)
    members = item.get("members", [])
    if not isinstance(members, list) or not all(
        isinstance(m, str) for m in members
    ):
        raise ParseError(f"pool {pool_id!r}: 'members' must be strings")
    return ResourcePool(pool_id, tuple(members))


def _check_unique_ids(topology: Topology) -> List[Violation]:
    found: List[Violation] = []
    seen: set = set()
    elements = (
        *(n.id for n in topology.nodes),
        *(lk.id for lk in topology.links),
        *(p.id for p in topology.pools),
    )
    for element_id in elements:
        if element_id in seen:
            found.append(
                Violation(element_id, "duplicate-id", "id is used twice")
            )
        seen.add(element_id)
    return found


def _check_nodes(topology: Topology) -> List[Violation]:
    found: List[Violation] = []
    for node in topology.nodes:
        for dimension, value in node.capacity.to_dict().items():
            if value < 0:
                found.append(
                    Violation(
                        node.id,
                        "negative-capacity",
                        f"{dimension} capacity {value} < 0",
                    )
                )
        if node.kind.is_compute and node.capacity.is_zero():
            found.append(
                Violation(
                    node.id,
                    "missing-capacity",
                    f"{node.kind.value} must carry capacity",
                )
            )
        if not node.kind.is_compute and not node.capacity.is_zero():
            found.append(
                Violation(
                    node.id,
                    "unexpected-capacity",
                    f"{node.kind.value} carries no capacity",
                )
            )
    return found


def _check_hierarchy(topology: Topology) -> List[Violation]:
    found: List[Violation] = []
    for node in topology.nodes:
        if node.parent is None:
            continue
        if not topology.has_node(node.parent):
            found.append(
                Violation(
                    node.id,
                    "dangling-reference",
                    f"parent {node.parent!r} does not exist",
                )
            )
            continue
        if _in_cycle(topology, node.id):
            found.append(
                Violation(
                    node.id, "cycle", "parent chain returns to this node"
                )
            )
            continue
        parent_kind = topology.node(node.parent).kind
        if parent_kind not in ALLOWED_PARENTS[node.kind]:
            found.append(
                Violation(
                    node.id,
                    "bad-parent",
                    f"{node.kind.value} cannot sit under "
                    f"{parent_kind.value} {node.parent!r}",
                )
            )
    return found


def _in_cycle(topology: Topology, node_id: str) -> bool:
    seen = set()
    current = topology.node(node_id).parent
    while current is not None and topology.has_node(current):
        if current == node_id:
            return True
        if current in seen:
            return False
        seen.add(current)
        current = topology.node(current).parent
    return False


def _check_links(topology: Topology) -> List[Violation]:
    found: List[Violation] = []
    for link in topology.links:
        for endpoint in (link.a, link.b):
            if not topology.has_node(endpoint):
                found.append(
                    Violation(
                        link.id,
                        "dangling-reference",
                        f"endpoint {endpoint!r} does not exist",
                    )
                )
            elif not topology.node(endpoint).kind.is_routable:
                found.append(
                    Violation(
                        link.id,
                        "bad-endpoint",
                        f"endpoint {endpoint!r} is a grouping node",
                    )
                )
        if link.a == link.b:
            found.append(
                Violation(link.id, "self-loop", f"both ends are {link.a!r}")
            )
        if link.bandwidth_capacity <= 0:
            found.append(
                Violation(
                    link.id,
                    "non-positive-bandwidth",
                    f"bw {link.bandwidth_capacity} must be > 0",
                )
            )
        if link.latency < 0:
            found.append(
                Violation(
                    link.id,
                    "negative-latency",
                    f"latency {link.latency} < 0",
                )
            )
    return found


def _check_pools(topology: Topology) -> List[Violation]:
    found: List[Violation] = []
    for pool in topology.pools:
        for member in pool.members:
            if not topology.has_node(member):
                found.append(
                    Violation(
                        pool.id,
                        "dangling-reference",
                        f"member {member!r} does not exist",
                    )
                )
            elif not topology.node(member).kind.is_compute:
                found.append(
                    Violation(
                        pool.id,
                        "bad-member",
                        f"member {member!r} is a "
                        f"{topology.node(member).kind.value}",
                    )
                )
    return found
