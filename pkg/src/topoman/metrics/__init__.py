"""
Utilization sampling, the cross-scheme comparison and file export.
"""

from topoman.metrics.export import (
    export_decisions,
    export_events,
    export_report,
    export_report_json,
    export_series,
    write_json,
)
from topoman.metrics.report import (
    ComparisonReport,
    SchemeMeans,
    compare,
    compare_series,
    series_means,
)
from topoman.metrics.sampling import (
    UtilizationSample,
    UtilizationSeries,
    check_conservation,
    pool_utilization,
    sample,
)

__all__ = [
    "ComparisonReport",
    "SchemeMeans",
    "UtilizationSample",
    "UtilizationSeries",
    "check_conservation",
    "compare",
    "compare_series",
    "export_decisions",
    "export_events",
    "export_report",
    "export_report_json",
    "export_series",
    "pool_utilization",
    "sample",
    "series_means",
    "write_json",
]
