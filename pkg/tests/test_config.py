from __future__ import annotations

from pathlib import Path

import pytest
from conftest import SCENARIOS

from topoman.baselines import Scheme
from topoman.config import DEFAULT_OUT, OUT_ENV, Scenario, load_scenario
from topoman.errors import ConfigError, ParseError


def _minimal(**extra) -> dict:
    return {"topology": "topology.json", "trace": "trace.json", **extra}


def test_load_default_scenario(default_scenario) -> None:
    scenario = load_scenario(default_scenario)

    assert scenario.topology == SCENARIOS / "default" / "topology.json"
    assert scenario.trace == SCENARIOS / "default" / "trace.json"
    assert scenario.schemes == (
        Scheme.PROPOSED,
        Scheme.REALISTIC,
        Scheme.CAPACITY_AWARE,
    )
    assert scenario.sla.max_cpu_demand == 16
    assert scenario.params.realistic.theta == 0.2
    assert scenario.params.capacity_aware.risk_io == 1.3
    assert len(scenario.load_trace()) == 9


def test_generated_scenario_uses_its_seed() -> None:
    scenario = load_scenario(SCENARIOS / "synthetic" / "scenario.json")
    topology = scenario.load_topology()

    first = scenario.load_trace(topology)
    again = scenario.load_trace(topology)
    other = scenario.with_overrides(seed=8).load_trace(topology)

    assert len(first) == 24
    assert first == again
    assert first.generator.seed == 7
    assert other != first
    assert {r.source for r in first} == {"core"}


def test_scenario_round_trips_through_its_dict(default_scenario) -> None:
    scenario = load_scenario(default_scenario)

    assert Scenario.from_dict(scenario.to_dict()) == scenario


def test_single_scheme_key() -> None:
    scenario = Scenario.from_dict(_minimal(scheme="realistic"))

    assert scenario.schemes == (Scheme.REALISTIC,)
    assert scenario.with_overrides(schemes=[Scheme.PROPOSED]).schemes == (
        Scheme.PROPOSED,
    )


@pytest.mark.parametrize(
    "document",
    [
        _minimal(colour="blue"),
        {"trace": "trace.json"},
        {"topology": "topology.json"},
        _minimal(generator={"count": 3}),
        _minimal(scheme="proposed", schemes=["proposed"]),
        _minimal(schemes=["proposed", "proposed"]),
        _minimal(schemes=[]),
        _minimal(schemes=["greedy"]),
        _minimal(sample_interval=0),
        _minimal(sample_interval=1.5),
        _minimal(seed=-1),
        _minimal(retry="always"),
        _minimal(realistic={"theta": 2}),
        _minimal(capacity_aware={"risk_cpu": 0.5}),
        _minimal(sla={"max_cpu_demand": -1}),
        _minimal(topology=3),
    ],
)
def test_bad_scenarios_are_config_errors(document) -> None:
    with pytest.raises(ConfigError):
        Scenario.from_dict(document)


def test_scenario_file_must_hold_an_object(tmp_path) -> None:
    path = tmp_path / "scenario.json"
    path.write_text("[1, 2]")

    with pytest.raises(ParseError):
        load_scenario(path)
    with pytest.raises(FileNotFoundError):
        load_scenario(tmp_path / "missing.json")


def test_output_directory_precedence(tmp_path) -> None:
    with_out = Scenario.from_dict(_minimal(out="results"), tmp_path)
    without = Scenario.from_dict(_minimal(), tmp_path)
    env = {OUT_ENV: "/env/out"}

    assert with_out.output_dir("flag", env) == Path("flag")
    assert with_out.output_dir(None, env) == tmp_path / "results"
    assert without.output_dir(None, env) == Path("/env/out")
    assert without.output_dir(None, {}) == Path(DEFAULT_OUT)


def test_output_directory_reads_the_process_environment(
    tmp_path, monkeypatch
) -> None:
    monkeypatch.setenv(OUT_ENV, str(tmp_path / "from-env"))

    scenario = Scenario.from_dict(_minimal(), tmp_path)

    assert scenario.output_dir() == tmp_path / "from-env"
