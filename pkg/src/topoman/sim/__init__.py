"""
Discrete-event simulation of Batch workloads.
"""

from topoman.sim.events import (
    DecisionRecord,
    EventKind,
    EventRecord,
    JobQueue,
    SimEvent,
)
from topoman.sim.simulator import (
    RunParams,
    SimResult,
    run,
    run_comparison,
    sample_ticks,
)
from topoman.sim.trace import (
    TraceGeneratorSettings,
    WorkloadTrace,
    dump_trace,
    generate_batch_trace,
    load_trace,
    parse_trace,
    validate_trace,
)

__all__ = [
    "DecisionRecord",
    "EventKind",
    "EventRecord",
    "JobQueue",
    "RunParams",
    "SimEvent",
    "SimResult",
    "TraceGeneratorSettings",
    "WorkloadTrace",
    "dump_trace",
    "generate_batch_trace",
    "load_trace",
    "parse_trace",
    "run",
    "run_comparison",
    "sample_ticks",
    "validate_trace",
]
