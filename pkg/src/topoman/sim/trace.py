"""
Workload traces: loading, dumping, checking and seeded generation.
"""

from __future__ import annotations

import logging
import math
import os
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from topoman.admission.request import Request
from topoman.errors import (
    ConfigError,
    DuplicateRequestId,
    InvalidRange,
    InvalidRequest,
    ParseError,
    UnknownNode,
)
from topoman.topology.loader import read_json
from topoman.topology.model import NodeKind, Topology

logger = logging.getLogger(__name__)

TraceSource = Union[str, "os.PathLike[str]", Sequence[Any]]

Range = Tuple[float, float]


@dataclass(frozen=True)
class TraceGeneratorSettings:
    """
    Parameters of a synthetic Batch trace.

    Every range is inclusive on both ends. Arrivals are the running sum of
    integer gaps drawn from ``arrival_gap``, so they never decrease.

    :ivar count: Number of requests.
    :ivar seed: Seed of the random generator.
    :ivar arrival_gap: Ticks between consecutive arrivals.
    :ivar duration: Lease lifetime in ticks.
    :ivar cpu: CPU demand.
    :ivar mem: Memory demand.
    :ivar io: I/O demand.
    :ivar bw: Bandwidth demand.
    :ivar usage_fraction: Consumed share of the granted CPU.
    :ivar sources: Candidate source nodes; switches of the topology if empty.
    :ivar targets: Candidate target hosts; compute hosts if empty.
    """

    count: int = 9
    seed: int = 0
    arrival_gap: Tuple[int, int] = (0, 2)
    duration: Tuple[int, int] = (2, 8)
    cpu: Range = (1.0, 8.0)
    mem: Range = (1.0, 16.0)
    io: Range = (0.0, 4.0)
    bw: Range = (1.0, 10.0)
    usage_fraction: Range = (0.5, 1.0)
    sources: Tuple[str, ...] = field(default_factory=tuple)
    targets: Tuple[str, ...] = field(default_factory=tuple)

    def to_dict(self) -> dict:
        """
        Convert the settings to a JSON-ready dictionary.

        :return: Dictionary with ranges as two-element lists.
        :rtype: dict
        """
        return {
            k: list(v) if isinstance(v, tuple) else v
            for k, v in asdict(self).items()
        }

    @classmethod
    def from_dict(cls, data: Optional[dict]) -> "TraceGeneratorSettings":
        """
        Create settings from a scenario's ``generator`` object.

        :param data: Decoded JSON object; missing keys take defaults.
        :type data: dict | None
        :return: TraceGeneratorSettings instance.
        :rtype: TraceGeneratorSettings
        :raises ConfigError: On unknown keys or malformed ranges.
        """
        data = dict(data or {})
        unknown = set(data) - set(cls.__dataclass_fields__)
        if unknown:
            raise ConfigError(f"unknown generator keys: {sorted(unknown)}")
        for key, value in list(data.items()):
            if isinstance(value, list):
                data[key] = tuple(value)
        for key in ("arrival_gap", "duration", "cpu", "mem", "io", "bw"):
            if key in data and len(data[key]) != 2:
                raise ConfigError(f"generator.{key} must be [low, high]")
        if "usage_fraction" in data and len(data["usage_fraction"]) != 2:
            raise ConfigError("generator.usage_fraction must be [low, high]")
        return cls(**data)

    def with_overrides(
        self, count: Optional[int] = None, seed: Optional[int] = None
    ) -> "TraceGeneratorSettings":
        """Copy with ``count`` and ``seed`` replaced when given."""
        changes: Dict[str, int] = {}
        if count is not None:
            changes["count"] = count
        if seed is not None:
            changes["seed"] = seed
        return replace(self, **changes)


@dataclass(frozen=True)
class WorkloadTrace:
    """
    Requests in arrival order.

    :ivar requests: Requests with non-decreasing arrival ticks and unique
        ids.
    :ivar generator: Settings the trace was generated from, if any.
    """

    requests: Tuple[Request, ...] = ()
    generator: Optional[TraceGeneratorSettings] = None

    def __post_init__(self):
        seen = set()
        previous = 0
        for request in self.requests:
            if request.id in seen:
                raise DuplicateRequestId(
                    f"request id {request.id!r} appears twice in the trace"
                )
            seen.add(request.id)
            if request.arrival_time < previous:
                raise InvalidRequest(
                    f"request {request.id!r} arrives at "
                    f"{request.arrival_time}, before {previous}"
                )
            previous = request.arrival_time

    def __len__(self) -> int:
        return len(self.requests)

    def __iter__(self) -> Iterator[Request]:
        return iter(self.requests)

    @property
    def horizon(self) -> int:
        """Last tick any lease can hold resources until; 0 when empty."""
        return max(
            (r.arrival_time + r.duration for r in self.requests), default=0
        )


_NUMBER_FIELDS = (
    ("cpu", "cpu_demand"),
    ("mem", "mem_demand"),
    ("io", "io_demand"),
    ("bw", "bandwidth_demand"),
)


def _tick(item: dict, key: str, where: str) -> int:
    value = item.get(key)
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(f"{where}: {key!r} must be an integer tick")
    return value


def _parse_record(item: Any, index: int) -> Request:
    where = f"trace[{index}]"
    if not isinstance(item, dict):
        raise ParseError(f"{where}: expected an object")
    for key in ("id", "src", "dst", "target"):
        if not isinstance(item.get(key), str) or not item[key]:
            raise ParseError(f"{where}: {key!r} must be a non-empty string")
    where = f"{where} ({item['id']})"
    demands = {}
    for key, name in _NUMBER_FIELDS:
        value = item.get(key, 0)
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ParseError(f"{where}: {key!r} must be a number")
        demands[name] = float(value)
    optional = {}
    for key in ("usage_fraction", "weight"):
        if key in item:
            value = item[key]
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ParseError(f"{where}: {key!r} must be a number")
            optional[key] = float(value)
    return Request(
        id=item["id"],
        source=item["src"],
        destination=item["dst"],
        target=item["target"],
        duration=_tick(item, "duration", where),
        arrival_time=_tick(item, "arrival", where),
        **demands,
        **optional,
    )


def parse_trace(document: Any) -> WorkloadTrace:
    """
    Decode a trace document (a JSON array of request records).

    :raises ParseError: If a record is malformed.
    :raises InvalidRequest: If a record has bad values or arrivals decrease.
    :raises DuplicateRequestId: If two records share an id.
    """
    if not isinstance(document, list):
        raise ParseError("trace: expected a JSON array of requests")
    return WorkloadTrace(
        tuple(_parse_record(item, i) for i, item in enumerate(document))
    )


def load_trace(source: TraceSource) -> WorkloadTrace:
    """
    Load a workload trace.

    :param source: Path to a trace JSON file, or the decoded array.
    :type source: str | os.PathLike | Sequence
    :return: The trace.
    :rtype: WorkloadTrace
    :raises ParseError: If the document is malformed.
    :raises FileNotFoundError: If the file does not exist.
    """
    if isinstance(source, (str, os.PathLike)):
        document = read_json(Path(source))
    else:
        document = list(source)
    trace = parse_trace(document)
    logger.info(f"loaded trace with {len(trace)} requests")
    return trace


def dump_trace(trace: WorkloadTrace) -> List[Dict[str, Any]]:
    """
    Encode a trace as a list of JSON-ready records.

    ``usage_fraction`` and ``weight`` are omitted when they hold their
    default of 1.
    """
    records = []
    for r in trace:
        record: Dict[str, Any] = {
            "id": r.id,
            "arrival": r.arrival_time,
            "src": r.source,
            "dst": r.destination,
            "target": r.target,
            "cpu": r.cpu_demand,
            "mem": r.mem_demand,
            "io": r.io_demand,
            "bw": r.bandwidth_demand,
            "duration": r.duration,
        }
        if r.usage_fraction != 1:
            record["usage_fraction"] = r.usage_fraction
        if r.weight != 1:
            record["weight"] = r.weight
        records.append(record)
    return records


def validate_trace(trace: WorkloadTrace, topology: Topology) -> None:
    """
    Check every request refers to nodes the topology has.

    :raises UnknownNode: If a source, destination or target is missing.
    :raises InvalidRequest: If a target is not a compute host.
    """
    for request in trace:
        for node_id in (request.source, request.destination, request.target):
            if not topology.has_node(node_id):
                raise UnknownNode(node_id)
        if not topology.node(request.target).kind.is_compute:
            raise InvalidRequest(
                f"request {request.id!r}: target {request.target!r} is not "
                "a compute host"
            )


def _check_range(name: str, bounds: Sequence[float], low: float = 0) -> None:
    lo, hi = bounds
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise InvalidRange(f"{name}: bounds must be finite")
    if lo > hi:
        raise InvalidRange(f"{name}: low {lo} exceeds high {hi}")
    if lo < low:
        raise InvalidRange(f"{name}: low {lo} is below {low}")


def _candidates(
    settings: TraceGeneratorSettings, topology: Optional[Topology]
) -> Tuple[Tuple[str, ...], Tuple[str, ...]]:
    sources, targets = settings.sources, settings.targets
    if topology is not None:
        if not sources:
            sources = tuple(
                sorted(
                    n.id for n in topology.nodes if n.kind is NodeKind.SWITCH
                )
            )
        if not targets:
            targets = tuple(n.id for n in topology.compute_nodes())
    if not sources or not targets:
        raise ConfigError(
            "generator needs sources and targets, or a topology to draw "
            "them from"
        )
    return tuple(sources), tuple(targets)


def _draw(rng: np.random.Generator, bounds: Range) -> float:
    lo, hi = float(bounds[0]), float(bounds[1])
    value = round(float(rng.uniform(lo, hi)), 3)
    return min(max(value, lo), hi)


def generate_batch_trace(
    settings: TraceGeneratorSettings, topology: Optional[Topology] = None
) -> WorkloadTrace:
    """
    Generate a seeded synthetic Batch trace.

    Requests are named ``r1``, ``r2``, ... zero-padded to a common width so
    that id order is arrival order. Traffic ends at the target host.

    :param settings: Counts, ranges and candidate nodes.
    :type settings: TraceGeneratorSettings
    :param topology: Supplies default sources and targets.
    :type topology: Topology | None
    :return: The trace; identical for identical settings.
    :rtype: WorkloadTrace
    :raises InvalidRange: If the count is negative or a range is empty,
        reversed or negative.
    """
    if settings.count < 0:
        raise InvalidRange(f"count must be >= 0, got {settings.count}")
    _check_range("arrival_gap", settings.arrival_gap)
    _check_range("duration", settings.duration, low=1)
    for name in ("cpu", "mem", "io", "bw", "usage_fraction"):
        _check_range(name, getattr(settings, name))
    if settings.usage_fraction[1] > 1:
        raise InvalidRange("usage_fraction: high exceeds 1")
    if settings.count == 0:
        return WorkloadTrace((), settings)

    sources, targets = _candidates(settings, topology)
    rng = np.random.default_rng(settings.seed)
    width = len(str(settings.count))
    arrival = 0
    requests = []
    for index in range(settings.count):
        if index:
            arrival += int(
                rng.integers(
                    settings.arrival_gap[0],
                    settings.arrival_gap[1],
                    endpoint=True,
                )
            )
        target = targets[int(rng.integers(len(targets)))]
        requests.append(
            Request(
                id=f"r{index + 1:0{width}d}",
                source=sources[int(rng.integers(len(sources)))],
                destination=target,
                target=target,
                cpu_demand=_draw(rng, settings.cpu),
                mem_demand=_draw(rng, settings.mem),
                io_demand=_draw(rng, settings.io),
                bandwidth_demand=_draw(rng, settings.bw),
                duration=int(
                    rng.integers(
                        settings.duration[0],
                        settings.duration[1],
                        endpoint=True,
                    )
                ),
                arrival_time=arrival,
                usage_fraction=_draw(rng, settings.usage_fraction),
            )
        )
    logger.info(
        f"generated {len(requests)} requests with seed {settings.seed}"
    )
    return WorkloadTrace(tuple(requests), settings)
