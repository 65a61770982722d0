"""
Command-line front end.

Subcommands: ``validate``, ``run``, ``compare`` and ``gen-trace``. Every
subcommand reads a scenario file; flags override its keys.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Callable, Dict, Optional, Sequence

from topoman.baselines import Scheme
from topoman.config import Scenario, load_scenario
from topoman.errors import (
    ConfigError,
    DuplicateRequestId,
    InvalidRange,
    InvalidRequest,
    ParseError,
    TopomanError,
    UnknownNode,
    ValidationError,
)
from topoman.metrics.export import (
    export_decisions,
    export_events,
    export_report,
    export_report_json,
    export_series,
    write_json,
    write_text,
)
from topoman.metrics.report import compare
from topoman.sim.simulator import SimResult, run, run_comparison
from topoman.sim.trace import (
    TraceGeneratorSettings,
    dump_trace,
    generate_batch_trace,
    validate_trace,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INPUT = 2

_INPUT_ERRORS = (
    ConfigError,
    DuplicateRequestId,
    FileNotFoundError,
    InvalidRange,
    InvalidRequest,
    ParseError,
    UnknownNode,
    ValidationError,
)


def _seed(value: str) -> int:
    seed = int(value)
    if not 0 <= seed < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned u64")
    return seed


def _positive(value: str) -> int:
    number = int(value)
    if number < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return number


def build_parser() -> argparse.ArgumentParser:
    """
    Build the argument parser.

    :return: Parser with one sub-parser per command.
    :rtype: argparse.ArgumentParser
    """
    parser = argparse.ArgumentParser(
        prog="topoman",
        description="Resource-aware topology management simulator.",
    )
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument(
        "-v", "--verbose", action="store_true", help="log debug detail"
    )
    verbosity.add_argument(
        "-q", "--quiet", action="store_true", help="log errors only"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    def command(name: str, help_text: str) -> argparse.ArgumentParser:
        sub = commands.add_parser(name, help=help_text)
        sub.add_argument(
            "--scenario", required=True, type=Path, help="scenario JSON file"
        )
        return sub

    validate = command("validate", "check a scenario's topology and trace")
    validate.add_argument(
        "--show-directory",
        action="store_true",
        help="print the topology directory as JSON",
    )
    validate.add_argument("--seed", type=_seed, help="generator seed")

    run_cmd = command("run", "simulate one scheme")
    run_cmd.add_argument(
        "--scheme",
        type=Scheme.parse,
        help="proposed, realistic or capacity-aware",
    )

    compare_cmd = command("compare", "simulate and compare schemes")
    compare_cmd.add_argument(
        "--jobs",
        type=_positive,
        default=1,
        help="schemes simulated concurrently",
    )

    gen = command("gen-trace", "write a synthetic trace")
    gen.add_argument("--count", type=int, help="number of requests")

    for sub in (run_cmd, compare_cmd):
        sub.add_argument("--seed", type=_seed, help="generator seed")
        sub.add_argument("--out", help="output directory")
    gen.add_argument("--seed", type=_seed, help="generator seed")
    gen.add_argument("--out", help="trace file; stdout when omitted")
    return parser


def _load(args: argparse.Namespace) -> Scenario:
    scenario = load_scenario(args.scenario)
    return scenario.with_overrides(seed=getattr(args, "seed", None))


def write_run(result: SimResult, directory: Path) -> None:
    """
    Write one run's files into ``directory``.

    :param result: The run.
    :type result: SimResult
    :param directory: Output directory; created when missing.
    :type directory: pathlib.Path
    """
    export_series(result.series, directory / "utilization.csv")
    export_events(result.events, directory / "events.log")
    export_decisions(result.decisions, directory / "decisions.csv")
    write_json(directory / "summary.json", result.summary())


def cmd_validate(args: argparse.Namespace) -> int:
    """Check topology and trace; print the directory on request."""
    scenario = _load(args)
    topology = scenario.load_topology()
    trace = scenario.load_trace(topology)
    validate_trace(trace, topology)
    if args.show_directory:
        print(json.dumps(topology.directory(), indent=2))
    print(
        f"ok: {len(topology.nodes)} nodes, {len(topology.links)} links, "
        f"{len(topology.pools)} pools, {len(trace)} requests"
    )
    return EXIT_OK


def cmd_run(args: argparse.Namespace) -> int:
    """Simulate one scheme and write its files."""
    scenario = _load(args)
    scheme = args.scheme or scenario.schemes[0]
    topology = scenario.load_topology()
    trace = scenario.load_trace(topology)
    result = run(
        topology, trace, scheme, scenario.params, scenario.sample_interval
    )
    directory = scenario.output_dir(args.out)
    write_run(result, directory)
    logger.info(f"wrote {result.scheme} run to {directory}")
    return EXIT_OK


def cmd_compare(args: argparse.Namespace) -> int:
    """Simulate the scenario's schemes and write the comparison."""
    scenario = _load(args)
    topology = scenario.load_topology()
    trace = scenario.load_trace(topology)
    results = run_comparison(
        topology,
        trace,
        scenario.schemes,
        scenario.params,
        scenario.sample_interval,
        jobs=args.jobs,
    )
    report = compare(results)
    directory = scenario.output_dir(args.out)
    for name, result in results.items():
        write_run(result, directory / name)
    export_report_json(report, directory / "report.json")
    export_report(report, directory / "report.csv")
    logger.info(
        f"compared {', '.join(results)}: proposed below baseline average = "
        f"{report.proposed_below_baseline_average}"
    )
    return EXIT_OK


def cmd_gen_trace(args: argparse.Namespace) -> int:
    """Generate a trace from the scenario's generator settings."""
    scenario = load_scenario(args.scenario)
    settings = scenario.generator
    if settings is None:
        settings = TraceGeneratorSettings()
    seed = args.seed if args.seed is not None else scenario.seed
    settings = settings.with_overrides(count=args.count, seed=seed)
    trace = generate_batch_trace(settings, scenario.load_topology())
    text = json.dumps(dump_trace(trace), indent=2) + "\n"
    if args.out:
        write_text(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


COMMANDS: Dict[str, Callable[[argparse.Namespace], int]] = {
    "validate": cmd_validate,
    "run": cmd_run,
    "compare": cmd_compare,
    "gen-trace": cmd_gen_trace,
}


def _report_violations(exc: ValidationError) -> None:
    print("invalid topology:", file=sys.stderr)
    for violation in exc.violations:
        print(f"  {violation}", file=sys.stderr)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Entry point of the ``topoman`` command.

    :param argv: Arguments without the program name; ``sys.argv`` when
        omitted.
    :type argv: Sequence[str] | None
    :return: 0 on success, 2 for bad input, 1 when a run fails.
    :rtype: int
    """
    args = build_parser().parse_args(argv)
    level = logging.WARNING
    if args.verbose:
        level = logging.DEBUG
    elif args.quiet:
        level = logging.ERROR
    logging.basicConfig(
        level=level, format="%(levelname)s %(name)s: %(message)s"
    )
    try:
        return COMMANDS[args.command](args)
    except ValidationError as exc:
        _report_violations(exc)
        return EXIT_INPUT
    except FileNotFoundError as exc:
        print(
            f"error: file not found: {exc.filename or exc}", file=sys.stderr
        )
        return EXIT_INPUT
    except _INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (TopomanError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE
