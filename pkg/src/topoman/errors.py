"""
Exception hierarchy for topoman.
"""

from __future__ import annotations

from typing import TYPE_CHECKING, Sequence

if TYPE_CHECKING:
    from topoman.topology.model import Violation


class TopomanError(Exception):
    """Base class for every error raised by topoman."""


class ParseError(TopomanError, ValueError):
    """A document could not be decoded into the expected structure."""


class ValidationError(TopomanError, ValueError):
    """
    A document decoded fine but broke one or more model invariants.

    :param violations: The broken rules, each naming its element.
    :type violations: Sequence[Violation]
    """

    def __init__(self, violations: Sequence["Violation"]):
        self.violations = tuple(violations)
        lines = "; ".join(str(v) for v in self.violations)
        super().__init__(f"invalid topology: {lines}")


class ConfigError(TopomanError, ValueError):
    """A scenario setting is missing or out of range."""


class UnknownNode(TopomanError, KeyError):
    """A node id does not resolve in the topology."""

    def __init__(self, node_id: str):
        self.node_id = node_id
        super().__init__(node_id)

    def __str__(self) -> str:
        return f"unknown node {self.node_id!r}"


class UnknownPool(TopomanError, KeyError):
    """A pool id does not resolve in the topology."""

    def __init__(self, pool_id: str):
        self.pool_id = pool_id
        super().__init__(pool_id)

    def __str__(self) -> str:
        return f"unknown pool {self.pool_id!r}"


class InvalidRequest(TopomanError, ValueError):
    """A request has negative demands, a bad duration or a bad target."""


class DuplicateRequestId(TopomanError, ValueError):
    """A request id was registered twice with the application handler."""


class InsufficientBandwidth(TopomanError, ValueError):
    """A reservation asked for more than a link's residual bandwidth."""


class OverRelease(TopomanError, ValueError):
    """A release would lift a link's residual above its capacity."""


class InvalidRange(TopomanError, ValueError):
    """A generator range is empty, reversed or negative."""


class SchedulerStall(TopomanError, RuntimeError):
    """The event list ran dry while requests were still queued."""


class GridMismatch(TopomanError, ValueError):
    """Utilization series being compared were sampled on different ticks."""


class ConservationError(TopomanError, RuntimeError):
    """Allocated resources exceeded capacity somewhere."""


class ExportError(TopomanError, OSError):
    """An output file could not be written."""
