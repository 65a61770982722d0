"""
topoman: resource-aware topology management and admission simulator.
"""

from __future__ import annotations

from importlib import import_module
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from .baselines import Scheme
    from .config import Scenario, load_scenario
    from .metrics.report import ComparisonReport, compare
    from .sim.simulator import RunParams, SimResult, run, run_comparison
    from .topology.loader import load_topology
    from .topology.model import Topology

__all__ = [
    "ComparisonReport",
    "RunParams",
    "Scenario",
    "Scheme",
    "SimResult",
    "Topology",
    "compare",
    "load_scenario",
    "load_topology",
    "run",
    "run_comparison",
]

_EXPORTS = {
    "ComparisonReport": ".metrics.report",
    "RunParams": ".sim.simulator",
    "Scenario": ".config",
    "Scheme": ".baselines",
    "SimResult": ".sim.simulator",
    "Topology": ".topology.model",
    "compare": ".metrics.report",
    "load_scenario": ".config",
    "load_topology": ".topology.loader",
    "run": ".sim.simulator",
    "run_comparison": ".sim.simulator",
}


# NOTE: resolved lazily so that importing a subpackage does not pull in
# the simulator and its numpy dependency.
def __getattr__(name: str):
    if name in _EXPORTS:
        return getattr(import_module(_EXPORTS[name], __name__), name)
    raise AttributeError(name)
