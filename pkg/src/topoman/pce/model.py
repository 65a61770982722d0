"""
Value types shared by path computation and the path allocation table.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Mapping, Optional, Tuple, Union

from topoman.errors import ConfigError

Number = Union[int, float, Fraction]


def exact(value: Number) -> Fraction:
    """Exact rational form of a finite number."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float) and not math.isfinite(value):
        raise ValueError(f"not a finite number: {value}")
    return Fraction(value)


@dataclass(frozen=True)
class PathConstraints:
    """
    Constraints a path must satisfy.

    :ivar min_residual_bandwidth: Every link needs at least this much
        residual bandwidth.
    :ivar max_latency: Upper bound on summed link latency, if any.
    :ivar max_hops: Upper bound on the number of links, if any.
    """

    min_residual_bandwidth: float = 0.0
    max_latency: Optional[float] = None
    max_hops: Optional[int] = None

    def __post_init__(self):
        if self.min_residual_bandwidth < 0:
            raise ConfigError("min_residual_bandwidth must be >= 0")
        if self.max_latency is not None and self.max_latency < 0:
            raise ConfigError("max_latency must be >= 0")
        if self.max_hops is not None and self.max_hops < 0:
            raise ConfigError("max_hops must be >= 0")


@dataclass(frozen=True)
class Path:
    """
    A simple path through the routing graph.

    :ivar source: First node.
    :ivar destination: Last node.
    :ivar links: Link ids in travel order.
    :ivar nodes: Node ids in travel order, ``len(links) + 1`` of them.
    :ivar total_latency: Sum of link latencies.
    :ivar bottleneck_bandwidth: Smallest residual along the path when it was
        last checked; infinite for the empty path.
    """

    source: str
    destination: str
    links: Tuple[str, ...] = ()
    nodes: Tuple[str, ...] = ()
    total_latency: float = 0.0
    bottleneck_bandwidth: float = math.inf

    @property
    def hop_count(self) -> int:
        """Number of links."""
        return len(self.links)

    def __str__(self) -> str:
        return "->".join(self.nodes) if self.nodes else self.source


@dataclass(frozen=True)
class NoFeasiblePath:
    """
    Outcome of a path query whose feasible set is empty.

    :ivar source: Requested source.
    :ivar destination: Requested destination.
    """

    source: str
    destination: str

    def __str__(self) -> str:
        return f"no feasible path {self.source}->{self.destination}"


PathResult = Union[Path, NoFeasiblePath]


@dataclass(frozen=True)
class ResidualState:
    """
    Per-link bandwidth bookkeeping.

    Amounts are kept as exact rationals so that reserve followed by release
    restores the previous state bit for bit. Instances are immutable;
    :func:`topoman.pce.reserve` and :func:`topoman.pce.release` return new
    ones.

    :ivar capacities: Bandwidth capacity per link id.
    :ivar reserved: Bandwidth currently reserved per link id.
    """

    capacities: Mapping[str, Fraction] = field(default_factory=dict)
    reserved: Mapping[str, Fraction] = field(default_factory=dict)

    @classmethod
    def from_capacities(
        cls, capacities: Mapping[str, Number]
    ) -> "ResidualState":
        """
        A fresh state with nothing reserved.

        :param capacities: Bandwidth capacity per link id.
        :type capacities: Mapping[str, float]
        :return: ResidualState instance.
        :rtype: ResidualState
        """
        caps = {k: exact(v) for k, v in sorted(capacities.items())}
        return cls(caps, {k: Fraction(0) for k in caps})

    def residual_exact(self, link_id: str) -> Fraction:
        """Exact residual bandwidth of a link."""
        return self.capacities[link_id] - self.reserved[link_id]

    def residual(self, link_id: str) -> float:
        """
        Residual bandwidth of a link.

        :param link_id: The link id.
        :type link_id: str
        :return: Capacity minus reserved bandwidth.
        :rtype: float
        """
        return float(self.residual_exact(link_id))

    def has_room(self, link_id: str, amount: Number) -> bool:
        """Whether ``amount`` fits in the link's residual."""
        return self.residual_exact(link_id) >= exact(amount)

    def residuals(self) -> Dict[str, float]:
        """Residual bandwidth for every link, sorted by id."""
        return {k: self.residual(k) for k in self.capacities}

    def with_reserved(
        self, updates: Mapping[str, Fraction]
    ) -> "ResidualState":
        """Copy with some links' reserved amounts replaced."""
        reserved = dict(self.reserved)
        reserved.update(updates)
        return ResidualState(self.capacities, reserved)
