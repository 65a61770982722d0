from __future__ import annotations

import random
from fractions import Fraction

import pytest

from topoman.errors import ConfigError
from topoman.fairshare import ShareEntry, fair_shares, fill_level, usage


def _bisection(entries, capacity):
    demands = {e.lease_id: e.cpu_demand for e in entries}
    if sum(demands.values()) <= capacity:
        return demands
    low, high = 0.0, max(e.cpu_demand / e.weight for e in entries)
    for _ in range(200):
        mid = (low + high) / 2
        total = sum(min(e.cpu_demand, e.weight * mid) for e in entries)
        if total > capacity:
            high = mid
        else:
            low = mid
    return {e.lease_id: min(e.cpu_demand, e.weight * low) for e in entries}


def test_fair_shares_match_bisection_water_filling() -> None:
    rng = random.Random(1234)

    for _ in range(1000):
        entries = [
            ShareEntry(
                f"l{i}",
                rng.choice([0.0, rng.uniform(0, 10)]),
                rng.uniform(0.1, 4),
            )
            for i in range(rng.randint(1, 6))
        ]
        capacity = rng.uniform(0, 20)

        shares = fair_shares(entries, capacity)
        expected = _bisection(entries, capacity)

        assert list(shares) == [e.lease_id for e in entries]
        for lease_id, share in shares.items():
            assert share == pytest.approx(expected[lease_id], abs=1e-9)
        assert sum(shares.values()) <= capacity + 1e-9


def test_single_entry_takes_up_to_the_whole_host() -> None:
    assert fair_shares([ShareEntry("a", 50)], 16) == {"a": 16}
    assert fair_shares([ShareEntry("a", 3)], 16) == {"a": 3}


def test_everyone_gets_their_demand_when_it_fits() -> None:
    entries = [ShareEntry("a", 3), ShareEntry("b", 5, weight=2)]

    assert fair_shares(entries, 8) == {"a": 3, "b": 5}


def test_weights_split_an_oversubscribed_host() -> None:
    entries = [ShareEntry("a", 10), ShareEntry("b", 10, weight=3)]

    shares = fair_shares(entries, 8)

    assert shares == {"a": 2.0, "b": 6.0}
    assert fill_level(entries, 8) == 2.0


def test_small_demands_are_satisfied_first() -> None:
    entries = [ShareEntry("a", 1), ShareEntry("b", 10), ShareEntry("c", 10)]

    assert fair_shares(entries, 9) == {"a": 1, "b": 4.0, "c": 4.0}


def test_empty_and_invalid_inputs() -> None:
    assert fair_shares([], 4) == {}
    with pytest.raises(ConfigError):
        fair_shares([ShareEntry("a", 1)], -1)
    with pytest.raises(ConfigError):
        ShareEntry("a", 1, weight=0)
    with pytest.raises(ConfigError):
        ShareEntry("a", -1)


def test_usage_scales_shares_by_fraction() -> None:
    assert usage({"a": 4.0, "b": 2.0}, {"a": 0.5}) == {"a": 2.0, "b": 2.0}
    with pytest.raises(ConfigError):
        usage({"a": 1.0}, {"a": 2.0})


def _random_entries(rng, count=None):
    return [
        ShareEntry(f"l{i}", rng.uniform(0, 10), rng.uniform(0.1, 4))
        for i in range(count or rng.randint(1, 6))
    ]


def test_weighted_example_splits_as_water_filling() -> None:
    entries = [
        ShareEntry("a", 2),
        ShareEntry("b", 8, weight=2),
        ShareEntry("c", 6),
    ]

    shares = fair_shares(entries, 12)

    assert shares["a"] == 2
    assert shares["b"] == pytest.approx(20 / 3, abs=1e-12)
    assert shares["c"] == pytest.approx(10 / 3, abs=1e-12)
    assert fill_level(entries, 12) == pytest.approx(10 / 3)


def test_shares_are_pareto_efficient() -> None:
    rng = random.Random(2024)

    for _ in range(1000):
        entries = _random_entries(rng)
        capacity = rng.uniform(0, 30)
        demand = sum(e.cpu_demand for e in entries)

        shares = fair_shares(entries, capacity)

        total = sum(Fraction(s) for s in shares.values())
        assert total <= Fraction(capacity)
        assert float(total) == pytest.approx(min(capacity, demand))
        for entry in entries:
            assert 0 <= shares[entry.lease_id] <= entry.cpu_demand


def test_scaling_every_weight_leaves_shares_unchanged() -> None:
    rng = random.Random(77)

    for _ in range(500):
        entries = _random_entries(rng)
        capacity = rng.uniform(0, 20)
        factor = rng.choice([0.5, 2.0, rng.uniform(0.1, 10)])
        scaled = [
            ShareEntry(e.lease_id, e.cpu_demand, e.weight * factor)
            for e in entries
        ]

        shares = fair_shares(entries, capacity)
        again = fair_shares(scaled, capacity)

        for lease_id, share in shares.items():
            assert again[lease_id] == pytest.approx(share, abs=1e-9)


def test_removing_a_lease_never_shrinks_the_others() -> None:
    rng = random.Random(31)

    for _ in range(500):
        entries = _random_entries(rng, rng.randint(2, 6))
        capacity = rng.uniform(0, 20)
        gone = rng.randrange(len(entries))
        rest = entries[:gone] + entries[gone + 1 :]

        before = fair_shares(entries, capacity)
        after = fair_shares(rest, capacity)

        for entry in rest:
            assert after[entry.lease_id] >= before[entry.lease_id] - 1e-9


def test_oversubscribed_shares_never_exceed_capacity() -> None:
    rng = random.Random(5)

    for _ in range(2000):
        entries = [
            ShareEntry(f"l{i}", rng.uniform(1, 10), rng.uniform(0.1, 4))
            for i in range(rng.randint(2, 6))
        ]
        capacity = rng.uniform(0.1, 5)

        shares = fair_shares(entries, capacity)

        assert sum(Fraction(s) for s in shares.values()) <= Fraction(capacity)
