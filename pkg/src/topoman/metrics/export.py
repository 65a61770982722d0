"""
CSV and JSON writers for run and comparison outputs.

Floats are written with ``repr`` so every stored value reads back exactly,
and rows are always written in the same order; the same result therefore
always produces the same bytes.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import os
from pathlib import Path
from typing import Any, Iterable, Sequence, Union

from topoman.errors import ConservationError, ExportError
from topoman.metrics.report import ComparisonReport
from topoman.metrics.sampling import UtilizationSeries

logger = logging.getLogger(__name__)

Destination = Union[str, "os.PathLike[str]"]

SERIES_HEADER = ("tick", "cpu", "mem", "overall")
REPORT_HEADER = (
    "scheme",
    "mean_cpu",
    "mean_mem",
    "mean_overall",
    "asymmetry",
    "proposed_below_baseline_average",
)
EVENT_HEADER = ("time", "kind", "id", "detail")
DECISION_HEADER = ("request_id", "time", "outcome", "detail")


def _cell(value: Any) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _csv_text(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buffer.getvalue()


def write_text(destination: Destination, text: str) -> Path:
    """
    Write ``text`` to ``destination``, creating parent directories.

    :param destination: Output file.
    :type destination: str | os.PathLike
    :param text: Content, written as UTF-8 with ``\\n`` line endings.
    :type text: str
    :return: The written path.
    :rtype: pathlib.Path
    :raises ExportError: If the file cannot be written.
    """
    path = Path(destination)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise ExportError(f"cannot write {path}: {exc}") from exc
    logger.debug(f"wrote {path}")
    return path


def write_json(destination: Destination, data: Any) -> Path:
    """Write ``data`` as indented JSON with a trailing newline."""
    return write_text(destination, json.dumps(data, indent=2) + "\n")


def export_series(series: UtilizationSeries, destination: Destination) -> Path:
    """
    Write a utilization series as ``tick,cpu,mem,overall`` rows.

    :param series: The series; an empty one yields a header-only file.
    :type series: UtilizationSeries
    :param destination: Output CSV file.
    :type destination: str | os.PathLike
    :return: The written path.
    :rtype: pathlib.Path
    :raises ConservationError: If a sample exceeds 1 in any dimension.
    :raises ExportError: If the file cannot be written.
    """
    for item in series:
        if max(item.cpu, item.mem, item.overall) > 1:
            raise ConservationError(
                f"{series.scheme}: sample at tick {item.tick} exceeds 1"
            )
    rows = ((s.tick, s.cpu, s.mem, s.overall) for s in series)
    return write_text(destination, _csv_text(SERIES_HEADER, rows))


def export_report(report: ComparisonReport, destination: Destination) -> Path:
    """
    Write the per-scheme means and asymmetry indices as CSV.

    Every row repeats the baseline-average flag: ``true``, ``false``, or
    empty when the three schemes were not all compared.
    """
    flag = report.proposed_below_baseline_average
    flag_cell = "" if flag is None else str(flag).lower()
    rows = (
        (name, m.cpu, m.mem, m.overall, report.asymmetry[name], flag_cell)
        for name, m in report.scheme_means.items()
    )
    return write_text(destination, _csv_text(REPORT_HEADER, rows))


def export_report_json(
    report: ComparisonReport, destination: Destination
) -> Path:
    """Write the full report, flag included, as JSON."""
    return write_json(destination, report.to_dict())


def export_events(records: Iterable[Any], destination: Destination) -> Path:
    """
    Write an event log as ``time,kind,id,detail`` rows.

    :param records: Objects with ``time``, ``kind``, ``id`` and ``detail``.
    :type records: Iterable
    """
    rows = ((r.time, r.kind, r.id, r.detail) for r in records)
    return write_text(destination, _csv_text(EVENT_HEADER, rows))


def export_decisions(records: Iterable[Any], destination: Destination) -> Path:
    """
    Write decisions as ``request_id,time,outcome,detail`` rows.

    :param records: Objects with ``request_id``, ``time``, ``outcome`` and
        ``detail``.
    :type records: Iterable
    """
    rows = ((r.request_id, r.time, r.outcome, r.detail) for r in records)
    return write_text(destination, _csv_text(DECISION_HEADER, rows))
