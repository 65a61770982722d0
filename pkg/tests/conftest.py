from __future__ import annotations

import random
import sys
from pathlib import Path

import pytest

PACKAGE_ROOT = Path(__file__).resolve().parents[1]
SRC_ROOT = PACKAGE_ROOT / "src"
SCENARIOS = PACKAGE_ROOT / "scenarios"

if str(SRC_ROOT) not in sys.path:
    sys.path.insert(0, str(SRC_ROOT))

# pylint: disable=wrong-import-position
from topoman.admission.request import Request  # noqa: E402
from topoman.topology.loader import load_topology  # noqa: E402
from topoman.topology.model import (  # noqa: E402
    Capacity,
    Link,
    Node,
    NodeKind,
    Topology,
)


def _link(a: str, b: str, latency: int) -> dict:
    return {"id": f"{a}~{b}", "a": a, "b": b, "bw": 100, "latency": latency}


def fabric_document() -> dict:
    """Two blocks, three hosts, a core and two ToR switches."""
    host = {"cpu": 16, "mem": 32, "io": 16}
    return {
        "nodes": [
            {"id": "z1", "kind": "Zone"},
            {"id": "b1", "kind": "Block", "parent": "z1"},
            {"id": "b2", "kind": "Block", "parent": "z1"},
            {"id": "core", "kind": "Switch", "parent": "z1"},
            {"id": "tor1", "kind": "Switch", "parent": "b1"},
            {"id": "tor2", "kind": "Switch", "parent": "b2"},
            {"id": "c1", "kind": "ComputeNode", "parent": "b1", **host},
            {"id": "c2", "kind": "ComputeNode", "parent": "b1", **host},
            {"id": "c3", "kind": "ComputeNode", "parent": "b2", **host},
        ],
        "links": [
            _link("c1", "tor1", 1),
            _link("c2", "tor1", 1),
            _link("c3", "tor2", 1),
            _link("tor1", "core", 2),
            _link("tor2", "core", 2),
            _link("tor1", "tor2", 1),
        ],
        "pools": [
            {"id": "b1-pool", "members": ["c1", "c2"]},
            {"id": "b2-pool", "members": ["c3"]},
        ],
    }


def single_host(cpu: float = 8, mem: float = 8, io: float = 8) -> Topology:
    """One switch wired to one compute host."""
    return Topology(
        nodes=[
            Node("z", NodeKind.ZONE),
            Node("sw", NodeKind.SWITCH, "z"),
            Node("h", NodeKind.COMPUTE_NODE, "z", Capacity(cpu, mem, io)),
        ],
        links=[Link("h~sw", "h", "sw", 100, 1)],
    )


def make_request(request_id: str = "r1", **overrides) -> Request:
    fields = {
        "source": "core",
        "destination": "c1",
        "target": "c1",
        "cpu_demand": 4.0,
        "mem_demand": 4.0,
        "io_demand": 1.0,
        "bandwidth_demand": 10.0,
        "duration": 4,
        "arrival_time": 0,
    }
    fields.update(overrides)
    return Request(request_id, **fields)


def random_topology(rng: random.Random, max_nodes: int = 10) -> Topology:
    """Connected switch mesh with integer latencies and bandwidths."""
    count = rng.randint(2, max_nodes)
    names = [f"s{i}" for i in range(count)]
    nodes = [Node("z", NodeKind.ZONE)]
    nodes += [Node(n, NodeKind.SWITCH, "z") for n in names]
    links = []
    for i in range(1, count):
        j = rng.randrange(i)
        links.append(
            Link(
                f"l{len(links):02d}",
                names[i],
                names[j],
                rng.randint(1, 10),
                rng.randint(0, 5),
            )
        )
    target = rng.randint(count - 1, 20)
    while len(links) < target:
        a, b = rng.sample(names, 2)
        links.append(
            Link(
                f"l{len(links):02d}",
                a,
                b,
                rng.randint(1, 10),
                rng.randint(0, 5),
            )
        )
    return Topology(nodes, links)


@pytest.fixture
def fabric() -> Topology:
    return load_topology(fabric_document())


@pytest.fixture
def default_scenario() -> Path:
    return SCENARIOS / "default" / "scenario.json"
