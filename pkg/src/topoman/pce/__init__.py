"""
Path computation element and the path allocation table.
"""

from topoman.pce.compute import (
    compute_path,
    is_feasible,
    refresh,
    release,
    reserve,
)
from topoman.pce.model import (
    NoFeasiblePath,
    Path,
    PathConstraints,
    PathResult,
    ResidualState,
)
from topoman.pce.table import (
    CacheCounters,
    CacheOutcome,
    PathAllocationTable,
    lookup_or_compute,
)

__all__ = [
    "CacheCounters",
    "CacheOutcome",
    "NoFeasiblePath",
    "Path",
    "PathAllocationTable",
    "PathConstraints",
    "PathResult",
    "ResidualState",
    "compute_path",
    "is_feasible",
    "lookup_or_compute",
    "refresh",
    "release",
    "reserve",
]
