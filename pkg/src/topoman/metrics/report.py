"""
Cross-scheme comparison of utilization runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Dict, Mapping, Optional, Sequence

from topoman.errors import GridMismatch
from topoman.metrics.sampling import UtilizationSample, UtilizationSeries

if TYPE_CHECKING:
    from topoman.sim.simulator import SimResult

PROPOSED = "proposed"
BASELINES = ("realistic", "capacity-aware")


@dataclass(frozen=True)
class SchemeMeans:
    """
    Arithmetic means of one series.

    :ivar cpu: Mean CPU utilization.
    :ivar mem: Mean memory utilization.
    :ivar overall: Mean overall utilization.
    """

    cpu: float = 0.0
    mem: float = 0.0
    overall: float = 0.0

    @property
    def asymmetry(self) -> float:
        """Distance between CPU and memory means."""
        return abs(self.cpu - self.mem)

    def to_dict(self) -> dict:
        """Dictionary form."""
        return {"cpu": self.cpu, "mem": self.mem, "overall": self.overall}


def series_means(samples: Sequence[UtilizationSample]) -> SchemeMeans:
    """
    Means over samples; all zero for an empty series.

    Sums are exactly rounded, so the result does not depend on sample
    order.
    """
    if not samples:
        return SchemeMeans()
    n = len(samples)
    return SchemeMeans(
        cpu=math.fsum(s.cpu for s in samples) / n,
        mem=math.fsum(s.mem for s in samples) / n,
        overall=math.fsum(s.overall for s in samples) / n,
    )


@dataclass(frozen=True)
class ComparisonReport:
    """
    Utilization comparison across schemes.

    :ivar scheme_means: Means per scheme, in input order.
    :ivar proposed_below_baseline_average: Whether the proposed scheme's
        overall mean is at most the average of the two baselines' overall
        means; ``None`` unless all three schemes are present.
    :ivar asymmetry: ``|mean cpu - mean mem|`` per scheme.
    :ivar admissions: Admitted/rejected counts per scheme.
    :ivar cache: Path-table counters per scheme.
    """

    scheme_means: Dict[str, SchemeMeans]
    proposed_below_baseline_average: Optional[bool]
    asymmetry: Dict[str, float]
    admissions: Dict[str, dict] = field(default_factory=dict)
    cache: Dict[str, dict] = field(default_factory=dict)

    def to_dict(self) -> dict:
        """
        JSON-ready form.

        :return: Dictionary with keys ``scheme_means``,
            ``proposed_below_baseline_average``, ``asymmetry``,
            ``admissions`` and ``cache``.
        :rtype: dict
        """
        return {
            "scheme_means": {
                k: v.to_dict() for k, v in self.scheme_means.items()
            },
            "proposed_below_baseline_average": (
                self.proposed_below_baseline_average
            ),
            "asymmetry": dict(self.asymmetry),
            "admissions": dict(self.admissions),
            "cache": dict(self.cache),
        }


def check_grid(series: Mapping[str, UtilizationSeries]) -> None:
    """
    Ensure every series was sampled on the same ticks.

    :raises GridMismatch: Naming the first scheme that differs.
    """
    reference = None
    reference_name = None
    for name, item in series.items():
        ticks = item.ticks()
        if reference is None:
            reference, reference_name = ticks, name
        elif ticks != reference:
            raise GridMismatch(
                f"{name} was sampled on a different grid than "
                f"{reference_name}"
            )


def compare_series(
    series: Mapping[str, UtilizationSeries],
) -> ComparisonReport:
    """
    Compare utilization series keyed by scheme name.

    :param series: Series per scheme name.
    :type series: Mapping[str, UtilizationSeries]
    :return: The report without admission or cache detail.
    :rtype: ComparisonReport
    :raises GridMismatch: If the tick grids differ.
    """
    check_grid(series)
    means = {name: series_means(item.samples) for name, item in series.items()}
    flag = None
    if PROPOSED in means and all(b in means for b in BASELINES):
        baseline_average = (
            means[BASELINES[0]].overall + means[BASELINES[1]].overall
        ) / 2
        flag = means[PROPOSED].overall <= baseline_average
    return ComparisonReport(
        scheme_means=means,
        proposed_below_baseline_average=flag,
        asymmetry={name: m.asymmetry for name, m in means.items()},
    )


def compare(results: Mapping[str, "SimResult"]) -> ComparisonReport:
    """
    Compare simulation results keyed by scheme name.

    :param results: Result per scheme name.
    :type results: Mapping[str, SimResult]
    :return: Means, the baseline-average flag, asymmetry indices, and per
        scheme admission and cache counters.
    :rtype: ComparisonReport
    :raises GridMismatch: If the runs were sampled on different ticks.
    """
    report = compare_series({k: r.series for k, r in results.items()})
    return ComparisonReport(
        scheme_means=report.scheme_means,
        proposed_below_baseline_average=(
            report.proposed_below_baseline_average
        ),
        asymmetry=report.asymmetry,
        admissions={k: r.admission_counts() for k, r in results.items()},
        cache={k: r.cache.to_dict() for k, r in results.items()},
    )
