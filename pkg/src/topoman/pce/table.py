"""
Path allocation table: a cache of previously computed paths.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Tuple

import networkx as nx

from topoman.pce.compute import compute_path, is_feasible, refresh
from topoman.pce.model import (
    NoFeasiblePath,
    Path,
    PathConstraints,
    PathResult,
    ResidualState,
)

logger = logging.getLogger(__name__)

TableKey = Tuple[str, str, PathConstraints]


class CacheOutcome(str, Enum):
    """How a table lookup was served."""

    HIT = "hit"
    MISS = "miss"
    STALE_RECOMPUTE = "stale-recompute"


@dataclass(frozen=True)
class CacheCounters:
    """
    Snapshot of the table's counters.

    :ivar hits: Lookups served from the table.
    :ivar misses: Lookups with no entry.
    :ivar stale_recomputes: Lookups whose entry failed revalidation.
    :ivar computations: Fresh path computations performed.
    """

    hits: int = 0
    misses: int = 0
    stale_recomputes: int = 0
    computations: int = 0

    def to_dict(self) -> dict:
        """Dictionary form, keys in a fixed order."""
        return {
            "hits": self.hits,
            "misses": self.misses,
            "stale_recomputes": self.stale_recomputes,
            "computations": self.computations,
        }


class PathAllocationTable:
    """
    Cache of computed paths keyed by (source, destination, constraints).

    A cached path is served as long as it stays feasible under the current
    residuals, even when a better path has since appeared. Failed lookups
    are never cached.
    """

    def __init__(self):
        self._entries: Dict[TableKey, Path] = {}
        self.hits = 0
        self.misses = 0
        self.stale_recomputes = 0
        self.computations = 0

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, key: TableKey) -> bool:
        return key in self._entries

    def get(self, key: TableKey) -> Path | None:
        """The cached path for ``key``, without revalidation."""
        return self._entries.get(key)

    def counters(self) -> CacheCounters:
        """
        Current counters.

        :return: Immutable snapshot.
        :rtype: CacheCounters
        """
        return CacheCounters(
            self.hits, self.misses, self.stale_recomputes, self.computations
        )

    # Justification: mirrors compute_path plus the table itself.
    # pylint: disable=too-many-positional-arguments
    def lookup_or_compute(
        self,
        graph: nx.MultiGraph,
        residuals: ResidualState,
        src: str,
        dst: str,
        constraints: PathConstraints,
    ) -> Tuple[PathResult, CacheOutcome]:
        """
        Serve a path from the table, computing it when needed.

        :param graph: Routing view.
        :type graph: networkx.MultiGraph
        :param residuals: Current residuals.
        :type residuals: ResidualState
        :param src: Source node id.
        :type src: str
        :param dst: Destination node id.
        :type dst: str
        :param constraints: Feasibility bounds.
        :type constraints: PathConstraints
        :return: The path (or :class:`NoFeasiblePath`) and how it was served.
        :rtype: tuple[Path | NoFeasiblePath, CacheOutcome]
        :raises UnknownNode: If ``src`` or ``dst`` is not in the graph.
        """
        key: TableKey = (src, dst, constraints)
        cached = self._entries.get(key)
        if cached is not None and is_feasible(cached, residuals, constraints):
            self.hits += 1
            path = refresh(cached, residuals)
            self._entries[key] = path
            logger.debug(f"path table hit {src}->{dst}")
            return path, CacheOutcome.HIT

        if cached is None:
            self.misses += 1
            outcome = CacheOutcome.MISS
        else:
            self.stale_recomputes += 1
            outcome = CacheOutcome.STALE_RECOMPUTE
            del self._entries[key]

        self.computations += 1
        result = compute_path(graph, residuals, src, dst, constraints)
        if not isinstance(result, NoFeasiblePath):
            self._entries[key] = result
        logger.debug(f"path table {outcome.value} {src}->{dst}: {result}")
        return result, outcome


# Justification: functional form of the table method.
# pylint: disable=too-many-positional-arguments
def lookup_or_compute(
    table: PathAllocationTable,
    graph: nx.MultiGraph,
    residuals: ResidualState,
    src: str,
    dst: str,
    constraints: PathConstraints,
) -> Tuple[PathResult, CacheOutcome]:
    """
    Serve a path from ``table``, computing it when needed.

    See :meth:`PathAllocationTable.lookup_or_compute`.
    """
    return table.lookup_or_compute(graph, residuals, src, dst, constraints)
