from __future__ import annotations

import random

import pytest
from conftest import make_request

from topoman.admission import (
    SUFFICIENT,
    Admitted,
    ApplicationHandler,
    ComputeState,
    InsufficientResources,
    Rejected,
    SlaBreach,
    admit,
    check_resources,
    expire_leases,
    reason_code,
)
from topoman.errors import (
    ConfigError,
    ConservationError,
    DuplicateRequestId,
    InvalidRequest,
    UnknownNode,
)
from topoman.pce import NoFeasiblePath, PathAllocationTable, ResidualState
from topoman.sla import SlaPolicy, check_sla
from topoman.topology import routing_graph


def _states(topology):
    return (
        ComputeState.from_topology(topology),
        ResidualState.from_capacities(topology.link_capacities()),
    )


def _admit(topology, request, policy=None, **kwargs):
    compute, residuals = _states(topology)
    table = kwargs.pop("table", PathAllocationTable())
    return admit(
        request,
        policy or SlaPolicy(),
        kwargs.pop("compute", compute),
        kwargs.pop("residuals", residuals),
        table,
        topology,
        kwargs.pop("now", request.arrival_time),
        **kwargs,
    )


def test_check_sla_reports_every_exceeded_bound_in_order() -> None:
    policy = SlaPolicy(max_cpu_demand=2, max_mem_demand=2, max_io_demand=2)
    request = make_request(cpu_demand=3, mem_demand=5, io_demand=4)

    violations = check_sla(request, policy)

    assert [v.dimension for v in violations] == ["cpu", "io", "mem"]
    assert violations[0].bound == 2 and violations[0].offered == 3


def test_check_sla_bound_is_inclusive() -> None:
    policy = SlaPolicy(max_cpu_demand=4)

    assert check_sla(make_request(cpu_demand=4), policy) == []
    assert check_sla(make_request(cpu_demand=100), SlaPolicy()) == []


def test_sla_policy_settings_are_checked() -> None:
    with pytest.raises(ConfigError):
        SlaPolicy(max_cpu_demand=-1)
    with pytest.raises(ConfigError):
        SlaPolicy.from_dict({"max_gpu_demand": 1})

    policy = SlaPolicy.from_dict({"max_path_latency": 5})
    assert policy.to_dict() == {"max_path_latency": 5}


def test_request_values_are_checked() -> None:
    with pytest.raises(InvalidRequest):
        make_request(cpu_demand=-1)
    with pytest.raises(InvalidRequest):
        make_request(duration=0)
    with pytest.raises(InvalidRequest):
        make_request(usage_fraction=1.5)
    with pytest.raises(InvalidRequest):
        make_request(weight=0)


def test_admit_grants_a_lease_and_updates_state(fabric) -> None:
    request = make_request(arrival_time=3, duration=5)

    result = _admit(fabric, request)

    assert isinstance(result.decision, Admitted)
    lease = result.decision.lease
    assert (lease.start, lease.end) == (3, 8)
    assert lease.path.links == ("tor1~core", "c1~tor1")
    assert result.compute_state.allocated_on("c1").cpu == 4
    assert result.residuals.residual("c1~tor1") == 90
    assert result.residuals.residual("c2~tor1") == 100


def test_sla_breach_terminates_before_any_other_gate(fabric) -> None:
    table = PathAllocationTable()
    compute, residuals = _states(fabric)

    result = _admit(
        fabric,
        make_request(cpu_demand=9),
        SlaPolicy(max_cpu_demand=8),
        table=table,
        compute=compute,
        residuals=residuals,
    )

    assert isinstance(result.decision, Rejected)
    assert isinstance(result.decision.reason, SlaBreach)
    assert reason_code(result.decision.reason) == "sla"
    assert table.counters().computations == 0
    assert result.compute_state == compute
    assert result.residuals == residuals


def test_sla_rejections_never_touch_state_on_random_suite(fabric) -> None:
    rng = random.Random(99)
    graph = routing_graph(fabric)
    policy = SlaPolicy(max_cpu_demand=3, max_mem_demand=6, max_io_demand=2)
    table = PathAllocationTable()
    handler = ApplicationHandler()
    compute, residuals = _states(fabric)
    violating = 0

    for index in range(200):
        target = rng.choice(["c1", "c2", "c3"])
        request = make_request(
            f"q{index}",
            destination=target,
            target=target,
            cpu_demand=rng.uniform(0, 6),
            mem_demand=rng.uniform(0, 8),
            io_demand=rng.uniform(0, 3),
            bandwidth_demand=rng.uniform(0, 2),
        )
        before = table.counters()
        result = admit(
            request,
            policy,
            compute,
            residuals,
            table,
            fabric,
            0,
            handler=handler,
            graph=graph,
        )
        if check_sla(request, policy):
            violating += 1
            assert isinstance(result.decision.reason, SlaBreach)
            assert table.counters() == before
            assert result.compute_state == compute
            assert result.residuals == residuals
        compute, residuals = result.compute_state, result.residuals

    assert violating > 50


def test_resource_gate_checks_cpu_mem_io_in_order(fabric) -> None:
    compute, _ = _states(fabric)
    compute = compute.allocate("c1", 14, 31, 16)

    verdict = check_resources(
        make_request(cpu_demand=4, mem_demand=4, io_demand=4), compute, fabric
    )
    assert verdict == InsufficientResources("cpu")

    verdict = check_resources(
        make_request(cpu_demand=1, mem_demand=4, io_demand=4), compute, fabric
    )
    assert verdict == InsufficientResources("mem")

    verdict = check_resources(
        make_request(cpu_demand=2, mem_demand=1, io_demand=0), compute, fabric
    )
    assert verdict is SUFFICIENT


def test_resource_rejection_keeps_state(fabric) -> None:
    compute, residuals = _states(fabric)
    full = compute.allocate("c1", 16, 0, 0)

    result = _admit(fabric, make_request(), compute=full, residuals=residuals)

    assert result.decision.reason == InsufficientResources("cpu")
    assert reason_code(result.decision.reason) == "resources"
    assert result.compute_state is full


def test_no_feasible_path_is_a_rejection(fabric) -> None:
    result = _admit(fabric, make_request(bandwidth_demand=1000))
    assert isinstance(result.decision.reason, NoFeasiblePath)
    assert reason_code(result.decision.reason) == "no-path"

    result = _admit(
        fabric, make_request(), SlaPolicy(max_path_latency=2)
    )
    assert isinstance(result.decision.reason, NoFeasiblePath)
    assert result.compute_state == ComputeState.from_topology(fabric)


def test_duplicate_ids_and_early_handling_are_errors(fabric) -> None:
    handler = ApplicationHandler()
    _admit(fabric, make_request("dup"), handler=handler)

    with pytest.raises(DuplicateRequestId):
        _admit(fabric, make_request("dup"), handler=handler)
    with pytest.raises(InvalidRequest):
        _admit(fabric, make_request(arrival_time=5), now=4)
    with pytest.raises(UnknownNode):
        _admit(fabric, make_request(target="ghost"))


def test_application_handler_registers_once() -> None:
    handler = ApplicationHandler()
    policy = SlaPolicy(max_cpu_demand=2)

    violations = handler.handle_application(make_request(), policy)

    assert [v.dimension for v in violations] == ["cpu"]
    assert "r1" in handler and len(handler) == 1
    with pytest.raises(DuplicateRequestId):
        handler.handle_application(make_request(), SlaPolicy())


def test_expiry_restores_the_initial_state_exactly(fabric) -> None:
    compute, residuals = _states(fabric)
    table = PathAllocationTable()
    handler = ApplicationHandler()
    leases = []
    state = (compute, residuals)
    for index, amount in enumerate((0.1, 0.2, 0.3)):
        result = admit(
            make_request(
                f"e{index}",
                cpu_demand=amount,
                mem_demand=amount,
                bandwidth_demand=amount,
                duration=index + 1,
            ),
            SlaPolicy(),
            *state,
            table,
            fabric,
            0,
            handler=handler,
        )
        state = (result.compute_state, result.residuals)
        leases.append(result.decision.lease)

    partial = expire_leases(*state, leases, 2)
    assert partial.released == ("e0", "e1")
    assert [lease.request_id for lease in partial.remaining] == ["e2"]

    final = expire_leases(
        partial.compute_state, partial.residuals, partial.remaining, 3
    )
    assert final.compute_state == compute
    assert final.residuals == residuals


def test_compute_state_refuses_overflow(fabric) -> None:
    compute, _ = _states(fabric)

    with pytest.raises(ConservationError):
        compute.allocate("c1", 17, 0, 0)
    with pytest.raises(ConservationError):
        compute.deallocate("c1", 1, 0, 0)
    assert compute.allocate("c1", 16, 32, 16).within_capacity()


def test_check_sla_never_forgives_a_larger_demand() -> None:
    rng = random.Random(41)

    for index in range(500):
        policy = SlaPolicy(
            max_cpu_demand=rng.uniform(0, 8),
            max_mem_demand=rng.uniform(0, 8),
            max_io_demand=rng.uniform(0, 8),
        )
        demands = {
            key: rng.uniform(0, 10)
            for key in ("cpu_demand", "mem_demand", "io_demand")
        }
        larger = {
            key: value + rng.uniform(0, 4) for key, value in demands.items()
        }

        before = check_sla(make_request(f"m{index}", **demands), policy)
        after = check_sla(make_request(f"m{index}", **larger), policy)

        assert {v.dimension for v in before} <= {v.dimension for v in after}
