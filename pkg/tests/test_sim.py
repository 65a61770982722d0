from __future__ import annotations

import pytest
from conftest import SCENARIOS, make_request

from topoman.baselines import RealisticParams, Scheme
from topoman.errors import (
    DuplicateRequestId,
    InvalidRange,
    InvalidRequest,
    ParseError,
    SchedulerStall,
    UnknownNode,
)
from topoman.metrics import check_conservation
from topoman.sim import (
    EventKind,
    JobQueue,
    RunParams,
    SimEvent,
    TraceGeneratorSettings,
    WorkloadTrace,
    dump_trace,
    generate_batch_trace,
    load_trace,
    parse_trace,
    run,
    run_comparison,
    sample_ticks,
    validate_trace,
)
from topoman.sim import simulator
from topoman.topology import load_topology
from topoman.topology.model import Capacity

DEFAULT = SCENARIOS / "default"


@pytest.fixture
def default_topology():
    return load_topology(DEFAULT / "topology.json")


@pytest.fixture
def default_trace():
    return load_trace(DEFAULT / "trace.json")


def test_event_order_is_time_then_kind_then_payload() -> None:
    events = [
        SimEvent(1, EventKind.SAMPLE, "1"),
        SimEvent(1, EventKind.ARRIVAL, "b"),
        SimEvent(1, EventKind.ARRIVAL, "a"),
        SimEvent(1, EventKind.LEASE_EXPIRY, "z"),
        SimEvent(0, EventKind.SAMPLE, "0"),
        SimEvent(1, EventKind.ADMISSION_ATTEMPT, "a"),
    ]

    ordered = sorted(events)

    assert [(e.time, e.kind.label, e.payload) for e in ordered] == [
        (0, "sample", "0"),
        (1, "expiry", "z"),
        (1, "arrival", "a"),
        (1, "arrival", "b"),
        (1, "attempt", "a"),
        (1, "sample", "1"),
    ]


def test_job_queue_is_fifo() -> None:
    queue = JobQueue()
    queue.push(make_request("a"))
    queue.push(make_request("b"))

    assert queue.head().id == "a"
    assert [queue.pop().id, queue.pop().id] == ["a", "b"]
    assert not queue
    with pytest.raises(IndexError):
        queue.pop()


def test_load_and_dump_trace(default_trace) -> None:
    assert len(default_trace) == 9
    assert default_trace.horizon == 8
    first = default_trace.requests[0]
    assert (first.id, first.target, first.usage_fraction) == ("r1", "c1", 0.5)

    records = dump_trace(default_trace)
    assert records[0]["usage_fraction"] == 0.5
    assert "weight" not in records[0]
    assert parse_trace(records) == default_trace


def test_trace_parse_errors() -> None:
    record = {
        "id": "r1",
        "arrival": 0,
        "src": "core",
        "dst": "c1",
        "target": "c1",
        "duration": 2,
    }

    with pytest.raises(ParseError):
        parse_trace({"not": "a list"})
    with pytest.raises(ParseError):
        parse_trace([{**record, "arrival": 0.5}])
    with pytest.raises(ParseError):
        parse_trace([{**record, "cpu": "many"}])
    with pytest.raises(DuplicateRequestId):
        parse_trace([record, record])
    with pytest.raises(InvalidRequest):
        parse_trace([{**record, "arrival": 3}, {**record, "id": "r2"}])
    assert parse_trace([{**record, "weight": 2}]).requests[0].weight == 2


def test_validate_trace_against_topology(default_topology) -> None:
    with pytest.raises(UnknownNode):
        validate_trace(
            WorkloadTrace((make_request(target="ghost"),)), default_topology
        )
    with pytest.raises(InvalidRequest):
        validate_trace(
            WorkloadTrace((make_request(target="tor1"),)), default_topology
        )


def test_generator_is_deterministic_and_in_range(default_topology) -> None:
    settings = TraceGeneratorSettings(count=9, seed=42)

    first = generate_batch_trace(settings, default_topology)
    second = generate_batch_trace(settings, default_topology)

    assert first == second
    assert len(first) == 9
    arrivals = [r.arrival_time for r in first]
    assert arrivals == sorted(arrivals)
    for request in first:
        assert 1 <= request.cpu_demand <= 8
        assert 2 <= request.duration <= 8
        assert request.source in {"core", "tor1", "tor2"}
        assert request.target in {"c1", "c2", "c3"}
        assert request.destination == request.target


def test_generator_edge_cases(default_topology) -> None:
    assert len(generate_batch_trace(TraceGeneratorSettings(count=0))) == 0

    fixed = generate_batch_trace(
        TraceGeneratorSettings(count=10, cpu=(4, 4), duration=(3, 3)),
        default_topology,
    )
    assert {r.cpu_demand for r in fixed} == {4.0}
    assert {r.duration for r in fixed} == {3}
    assert fixed.requests[0].id == "r01" and fixed.requests[-1].id == "r10"

    with pytest.raises(InvalidRange):
        generate_batch_trace(TraceGeneratorSettings(cpu=(5, 1)))
    with pytest.raises(InvalidRange):
        generate_batch_trace(TraceGeneratorSettings(count=-1))
    with pytest.raises(InvalidRange):
        generate_batch_trace(TraceGeneratorSettings(duration=(0, 2)))


def test_generator_settings_round_trip_through_dicts() -> None:
    settings = TraceGeneratorSettings(count=3, seed=9, sources=("core",))

    assert TraceGeneratorSettings.from_dict(settings.to_dict()) == settings
    assert settings.with_overrides(seed=1).seed == 1


def test_sample_grid_depends_only_on_the_trace(default_trace) -> None:
    assert sample_ticks(default_trace, 1) == list(range(9))
    assert sample_ticks(default_trace, 3) == [0, 3, 6]
    assert sample_ticks(WorkloadTrace(), 5) == [0]


def test_empty_trace_gives_an_idle_series(default_topology) -> None:
    result = run(default_topology, WorkloadTrace(), Scheme.PROPOSED)

    assert result.decisions == ()
    assert [(s.tick, s.cpu, s.mem, s.overall) for s in result.series] == [
        (0, 0.0, 0.0, 0.0)
    ]


def test_lease_holds_resources_for_its_duration(default_topology) -> None:
    trace = WorkloadTrace((make_request(arrival_time=2, duration=5),))

    result = run(default_topology, trace, Scheme.PROPOSED)

    busy = [s.tick for s in result.series if s.cpu > 0]
    assert busy == [2, 3, 4, 5, 6]
    assert result.series.samples[2].cpu == 4 / 48
    assert result.series.samples[2].mem == 4 / 96
    assert result.series.ticks() == tuple(range(8))


def test_expiry_runs_before_arrivals_at_the_same_tick(
    default_topology,
) -> None:
    trace = WorkloadTrace(
        (
            make_request("a", duration=2, cpu_demand=16),
            make_request("b", arrival_time=2, cpu_demand=16),
        )
    )

    result = run(default_topology, trace, Scheme.PROPOSED)

    at_two = [(e.kind, e.id) for e in result.events if e.time == 2]
    assert at_two == [
        ("expiry", "a"),
        ("arrival", "b"),
        ("attempt", "b"),
        ("sample", "2"),
    ]
    assert [d.outcome for d in result.decisions] == ["admitted", "admitted"]


def test_rejections_are_dropped_in_fifo_order(
    default_topology, default_trace
) -> None:
    result = run(default_topology, default_trace, Scheme.REALISTIC)

    assert [d.request_id for d in result.decisions] == [
        r.id for r in default_trace
    ]
    rejected = [
        d.request_id for d in result.decisions if d.outcome == "rejected"
    ]
    assert rejected == ["r1", "r2", "r3", "r9"]
    assert result.admission_counts() == {
        "admitted": 5,
        "rejected": 4,
        "by_reason": {"threshold": 4},
    }
    arrivals = {r.id: r.arrival_time for r in default_trace}
    assert all(d.time >= arrivals[d.request_id] for d in result.decisions)


def test_same_inputs_give_identical_results(
    default_topology, default_trace
) -> None:
    first = run(default_topology, default_trace, Scheme.CAPACITY_AWARE)
    second = run(default_topology, default_trace, Scheme.CAPACITY_AWARE)

    assert first == second
    assert first.admission_counts()["by_reason"] == {"resources": 3}
    assert first.decisions[0].request_id == "r1"
    assert first.decisions[0].detail.startswith("resources: ")


def test_runs_end_with_everything_released(
    default_topology, default_trace
) -> None:
    for scheme in Scheme:
        result = run(default_topology, default_trace, scheme)
        allocated, _ = result.compute_state.totals()
        assert allocated == Capacity()
        check_conservation(result.compute_state, result.residuals)
        assert set(result.residuals.residuals().values()) == {100}
        assert result.series.samples[-1].overall == 0


def test_realistic_with_theta_one_admits_nothing(
    default_topology, default_trace
) -> None:
    params = RunParams(realistic=RealisticParams(theta=1.0))

    result = run(default_topology, default_trace, Scheme.REALISTIC, params)

    assert result.admission_counts()["admitted"] == 0
    assert all(s.overall == 0 for s in result.series)


def test_comparison_runs_schemes_independently(
    default_topology, default_trace
) -> None:
    schemes = [Scheme.PROPOSED, Scheme.REALISTIC, Scheme.CAPACITY_AWARE]

    sequential = run_comparison(default_topology, default_trace, schemes)
    threaded = run_comparison(default_topology, default_trace, schemes, jobs=3)

    assert list(sequential) == ["proposed", "realistic", "capacity-aware"]
    assert sequential == threaded
    assert sequential["proposed"] == run(
        default_topology, default_trace, Scheme.PROPOSED
    )
    grids = {r.series.ticks() for r in sequential.values()}
    assert len(grids) == 1
    for result in sequential.values():
        for item in result.series:
            assert 0 <= item.cpu <= 1 and 0 <= item.mem <= 1


def test_pools_report_last_sample_utilization(
    default_topology, default_trace
) -> None:
    trace = WorkloadTrace((make_request(cpu_demand=8, mem_demand=16),))

    result = run(default_topology, trace, Scheme.REALISTIC)

    assert result.pools == {
        "b1-pool": {"cpu": 0.0, "mem": 0.0},
        "b2-pool": {"cpu": 0.0, "mem": 0.0},
    }
    assert result.series.samples[0].cpu == 8 / 48


def test_queue_left_behind_is_a_stall(default_topology, monkeypatch) -> None:
    def enqueue_only(self, event):
        self.queue.push(self.requests[event.payload])
        return "queued"

    monkeypatch.setattr(simulator._Run, "on_arrival", enqueue_only)

    with pytest.raises(SchedulerStall):
        run(
            default_topology,
            WorkloadTrace((make_request(),)),
            Scheme.PROPOSED,
        )


@pytest.mark.parametrize("scheme", list(Scheme))
def test_every_scheme_samples_consumed_cpu(default_topology, scheme) -> None:
    trace = WorkloadTrace(
        (make_request(cpu_demand=8, mem_demand=16, usage_fraction=0.5),)
    )

    result = run(default_topology, trace, scheme)

    first = result.series.samples[0]
    assert first.cpu == 4 / 48
    assert first.mem == 16 / 96
