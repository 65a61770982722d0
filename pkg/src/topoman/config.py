"""
Scenario configuration.

A scenario is a JSON document naming a topology, a trace (or the settings
to generate one), the schemes to run and their parameters. Relative paths
resolve against the scenario file's directory.
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Mapping, Optional, Sequence, Tuple, Union

from topoman.baselines import CapacityAwareParams, RealisticParams, Scheme
from topoman.errors import ConfigError, ParseError
from topoman.sim.simulator import RunParams
from topoman.sim.trace import (
    TraceGeneratorSettings,
    WorkloadTrace,
    generate_batch_trace,
    load_trace,
)
from topoman.sla import SlaPolicy
from topoman.topology.loader import load_topology, read_json
from topoman.topology.model import Topology

logger = logging.getLogger(__name__)

OUT_ENV = "TOPOMAN_OUT"
DEFAULT_OUT = "out"
ALL_SCHEMES = (Scheme.PROPOSED, Scheme.REALISTIC, Scheme.CAPACITY_AWARE)

_KEYS = {
    "topology",
    "trace",
    "generator",
    "scheme",
    "schemes",
    "sla",
    "realistic",
    "capacity_aware",
    "sample_interval",
    "seed",
    "out",
    "retry",
}


@dataclass(frozen=True)
class Scenario:
    """
    Settings binding inputs to runs.

    :ivar topology: Topology JSON file.
    :ivar trace: Trace JSON file; exclusive with ``generator``.
    :ivar generator: Synthetic trace settings; exclusive with ``trace``.
    :ivar schemes: Schemes to run, in report order.
    :ivar sla: The SLA in force.
    :ivar realistic: Product-logic threshold.
    :ivar capacity_aware: Risk factors.
    :ivar sample_interval: Ticks between utilization samples.
    :ivar seed: Overrides the generator's seed when set.
    :ivar out: Output directory.
    :ivar retry: Retry policy; only ``never``.
    """

    topology: Path
    trace: Optional[Path] = None
    generator: Optional[TraceGeneratorSettings] = None
    schemes: Tuple[Scheme, ...] = ALL_SCHEMES
    sla: SlaPolicy = field(default_factory=SlaPolicy)
    realistic: RealisticParams = field(default_factory=RealisticParams)
    capacity_aware: CapacityAwareParams = field(
        default_factory=CapacityAwareParams
    )
    sample_interval: int = 1
    seed: Optional[int] = None
    out: Optional[Path] = None
    retry: str = "never"

    def __post_init__(self):
        if (self.trace is None) == (self.generator is None):
            raise ConfigError(
                "scenario needs exactly one of 'trace' and 'generator'"
            )
        if not self.schemes:
            raise ConfigError("scenario names no schemes")
        if len(set(self.schemes)) != len(self.schemes):
            raise ConfigError("scenario names a scheme twice")
        if (
            isinstance(self.sample_interval, bool)
            or not isinstance(self.sample_interval, int)
            or self.sample_interval <= 0
        ):
            raise ConfigError("sample_interval must be a positive integer")
        if self.seed is not None and (
            isinstance(self.seed, bool)
            or not isinstance(self.seed, int)
            or self.seed < 0
        ):
            raise ConfigError("seed must be a non-negative integer")
        if self.retry != "never":
            raise ConfigError(f"retry must be 'never', got {self.retry!r}")

    @property
    def params(self) -> RunParams:
        """SLA and baseline parameters of the runs."""
        return RunParams(
            sla=self.sla,
            realistic=self.realistic,
            capacity_aware=self.capacity_aware,
            retry=self.retry,
        )

    def to_dict(self) -> dict:
        """
        Convert the scenario to a JSON-ready dictionary.

        :return: Dictionary with paths as strings.
        :rtype: dict
        """
        data: dict = {"topology": str(self.topology)}
        if self.trace is not None:
            data["trace"] = str(self.trace)
        if self.generator is not None:
            data["generator"] = self.generator.to_dict()
        data["schemes"] = [s.value for s in self.schemes]
        data["sla"] = self.sla.to_dict()
        data["realistic"] = self.realistic.to_dict()
        data["capacity_aware"] = self.capacity_aware.to_dict()
        data["sample_interval"] = self.sample_interval
        if self.seed is not None:
            data["seed"] = self.seed
        if self.out is not None:
            data["out"] = str(self.out)
        data["retry"] = self.retry
        return data

    @classmethod
    def from_dict(
        cls, data: Mapping[str, Any], base_dir: Union[str, Path] = "."
    ) -> "Scenario":
        """
        Create a scenario from its decoded JSON document.

        :param data: The scenario object.
        :type data: Mapping
        :param base_dir: Directory relative paths resolve against.
        :type base_dir: str | pathlib.Path
        :return: Scenario instance.
        :rtype: Scenario
        :raises ConfigError: On unknown keys, missing or conflicting keys
            and out-of-range values.
        """
        if not isinstance(data, Mapping):
            raise ConfigError("scenario must be a JSON object")
        unknown = set(data) - _KEYS
        if unknown:
            raise ConfigError(f"unknown scenario keys: {sorted(unknown)}")
        if data.get("topology") is None:
            raise ConfigError("scenario is missing 'topology'")
        base = Path(base_dir)

        def resolve(key: str) -> Optional[Path]:
            value = data.get(key)
            if value is None:
                return None
            if not isinstance(value, str):
                raise ConfigError(f"{key} must be a path string")
            return base / value

        generator = data.get("generator")
        return cls(
            topology=resolve("topology"),
            trace=resolve("trace"),
            generator=(
                None
                if generator is None
                else TraceGeneratorSettings.from_dict(generator)
            ),
            schemes=_schemes(data),
            sla=SlaPolicy.from_dict(data.get("sla")),
            realistic=RealisticParams.from_dict(data.get("realistic")),
            capacity_aware=CapacityAwareParams.from_dict(
                data.get("capacity_aware")
            ),
            sample_interval=data.get("sample_interval", 1),
            seed=data.get("seed"),
            out=resolve("out"),
            retry=data.get("retry", "never"),
        )

    def with_overrides(
        self,
        *,
        seed: Optional[int] = None,
        schemes: Optional[Sequence[Scheme]] = None,
    ) -> "Scenario":
        """Copy with command-line overrides applied when given."""
        changes: dict = {}
        if seed is not None:
            changes["seed"] = seed
        if schemes is not None:
            changes["schemes"] = tuple(schemes)
        return replace(self, **changes)

    def output_dir(
        self,
        flag: Optional[Union[str, Path]] = None,
        environ: Optional[Mapping[str, str]] = None,
    ) -> Path:
        """
        Resolve the output directory.

        Precedence: ``flag`` > scenario ``out`` > ``TOPOMAN_OUT`` >
        ``out`` in the working directory.
        """
        if flag:
            return Path(flag)
        if self.out is not None:
            return self.out
        env = os.environ if environ is None else environ
        if env.get(OUT_ENV):
            return Path(env[OUT_ENV])
        return Path(DEFAULT_OUT)

    def load_topology(self) -> Topology:
        """Load and validate the scenario's topology."""
        return load_topology(self.topology)

    def load_trace(self, topology: Optional[Topology] = None) -> WorkloadTrace:
        """
        Load the trace file, or generate the trace.

        :param topology: Supplies default generator sources and targets.
        :type topology: Topology | None
        :return: The workload.
        :rtype: WorkloadTrace
        """
        if self.trace is not None:
            return load_trace(self.trace)
        assert self.generator is not None
        settings = self.generator.with_overrides(seed=self.seed)
        return generate_batch_trace(settings, topology)


def _schemes(data: Mapping[str, Any]) -> Tuple[Scheme, ...]:
    if "scheme" in data and "schemes" in data:
        raise ConfigError("scenario sets both 'scheme' and 'schemes'")
    if "scheme" in data:
        return (Scheme.parse(data["scheme"]),)
    if "schemes" in data:
        names = data["schemes"]
        if not isinstance(names, list):
            raise ConfigError("schemes must be a list")
        return tuple(Scheme.parse(n) for n in names)
    return ALL_SCHEMES


def load_scenario(path: Union[str, Path]) -> Scenario:
    """
    Read a scenario file.

    :param path: Scenario JSON file.
    :type path: str | pathlib.Path
    :return: The scenario, paths resolved against its directory.
    :rtype: Scenario
    :raises FileNotFoundError: If the file does not exist.
    :raises ParseError: If it is not valid JSON.
    :raises ConfigError: If a setting is invalid.
    """
    path = Path(path)
    document = read_json(path)
    if not isinstance(document, dict):
        raise ParseError(f"{path}: expected a JSON object")
    scenario = Scenario.from_dict(document, path.parent)
    logger.debug(f"scenario {path}: {scenario.to_dict()}")
    return scenario
