"""
Share-fair CPU allocation.

Active leases on a host receive CPU by weighted max-min fairness
(water-filling): a common level ``lam`` rises until capacity or demand runs
out, and each lease gets ``min(demand, weight * lam)``. A lease alone on a
host may take the host's entire capacity. What a lease is granted is not
what it consumes; a usage fraction turns the former into the latter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Mapping, Optional, Sequence

from topoman.errors import ConfigError
from topoman.pce.model import exact

EffectiveShares = Dict[str, float]
UsageModel = Mapping[str, float]


@dataclass(frozen=True)
class ShareEntry:
    """
    One lease competing for a host's CPU.

    :ivar lease_id: The lease.
    :ivar cpu_demand: Compute units it asks for.
    :ivar weight: Relative share weight, strictly positive.
    """

    lease_id: str
    cpu_demand: float
    weight: float = 1.0

    def __post_init__(self):
        if not self.weight > 0:
            raise ConfigError(f"{self.lease_id}: weight must be > 0")
        if self.cpu_demand < 0:
            raise ConfigError(f"{self.lease_id}: cpu_demand must be >= 0")


def fair_shares(
    entries: Sequence[ShareEntry], cpu_capacity: float
) -> EffectiveShares:
    """
    Weighted max-min shares of ``cpu_capacity``.

    When total demand fits, every lease gets its full demand. Otherwise the
    fill level is found in closed form by satisfying leases in increasing
    order of ``demand / weight`` until the rest must split what remains in
    proportion to their weights.

    :param entries: Competing leases.
    :type entries: Sequence[ShareEntry]
    :param cpu_capacity: Host CPU capacity, >= 0.
    :type cpu_capacity: float
    :return: Effective share per lease id, in input order.
    :rtype: dict[str, float]
    """
    if cpu_capacity < 0:
        raise ConfigError("cpu_capacity must be >= 0")
    if not entries:
        return {}
    if len(entries) == 1:
        only = entries[0]
        return {only.lease_id: min(only.cpu_demand, cpu_capacity)}
    if sum(exact(e.cpu_demand) for e in entries) <= exact(cpu_capacity):
        return {e.lease_id: e.cpu_demand for e in entries}

    level = _exact_level(entries, cpu_capacity)
    return {
        e.lease_id: _round_down(
            min(exact(e.cpu_demand), exact(e.weight) * level)
        )
        for e in entries
    }


def _round_down(value: Fraction) -> float:
    # Nearest float at or below; the shares then never sum past capacity.
    result = float(value)
    if Fraction(result) > value:
        result = math.nextafter(result, -math.inf)
    return result


def _exact_level(
    entries: Sequence[ShareEntry], cpu_capacity: float
) -> Fraction:
    ordered = sorted(entries, key=lambda e: (_ratio(e), e.lease_id))
    remaining = exact(cpu_capacity)
    weight_left = sum(exact(e.weight) for e in ordered)
    for entry in ordered:
        level = remaining / weight_left
        if _ratio(entry) > level:
            return level
        remaining -= exact(entry.cpu_demand)
        weight_left -= exact(entry.weight)
    # Only reached when demand fits after all.
    return max(_ratio(e) for e in ordered)


def _ratio(entry: ShareEntry) -> Fraction:
    return exact(entry.cpu_demand) / exact(entry.weight)


def fill_level(entries: Sequence[ShareEntry], cpu_capacity: float) -> float:
    """
    The water level ``lam`` for an over-subscribed host.

    The level is found with exact rational arithmetic.

    :param entries: Competing leases whose demands exceed the capacity.
    :type entries: Sequence[ShareEntry]
    :param cpu_capacity: Host CPU capacity.
    :type cpu_capacity: float
    :return: Level at which ``sum(min(d, w * lam)) == cpu_capacity``.
    :rtype: float
    """
    return float(_exact_level(entries, cpu_capacity))


def usage(
    shares: Mapping[str, float], model: Optional[UsageModel] = None
) -> Dict[str, float]:
    """
    Actual CPU consumed per lease.

    :param shares: Effective shares per lease id.
    :type shares: Mapping[str, float]
    :param model: Usage fraction per lease id; missing leases use 1.
    :type model: Mapping[str, float] | None
    :return: ``share * fraction`` per lease id.
    :rtype: dict[str, float]
    """
    model = model or {}
    result = {}
    for lease_id, share in shares.items():
        fraction = model.get(lease_id, 1.0)
        if not 0 <= fraction <= 1:
            raise ConfigError(f"{lease_id}: usage fraction must be in [0, 1]")
        result[lease_id] = share * fraction
    return result
