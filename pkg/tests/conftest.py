"""Shared instances and random spec generators for the test suite.

The generators build sustainable inputs by construction (capacity = demand
plus slack, with optional exact-equality boundaries) and then assert
sustainability, so a generator bug cannot silently weaken the suite.
"""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from shallowcast import NetworkSpec, is_sustainable

F = Fraction


def three_site_tight() -> NetworkSpec:
    """Three sites whose aggregate uplink exactly covers the required fan-out.

    The relay-heavy worked instance used throughout the suite: site 3 cannot
    broadcast everything directly and must route most of its stream through
    site 2.
    """
    return NetworkSpec(uplink=(2, 10, 6), downlink=(None, None, None), rates=(1, 3, 5))


@pytest.fixture
def three_site() -> NetworkSpec:
    return three_site_tight()


def _random_fraction(rng: random.Random, max_num: int = 8, max_den: int = 6) -> Fraction:
    return F(rng.randint(1, max_num), rng.randint(1, max_den))


def _random_rates(rng: random.Random, n: int, integer: bool, zero_prob: float) -> list[Fraction]:
    rates = []
    for _ in range(n):
        if rng.random() < zero_prob:
            rates.append(F(0))
        elif integer:
            rates.append(F(rng.randint(1, 3)))
        else:
            rates.append(_random_fraction(rng))
    return rates


def random_sustainable_spec(
    rng: random.Random,
    n: int | None = None,
    max_n: int = 50,
    integer: bool = False,
    tight: bool | None = None,
    zero_prob: float = 0.15,
) -> NetworkSpec:
    """A spec that satisfies all three conditions, sometimes with exact equality.

    ``tight`` forces (or forbids) condition 3 holding with equality; by default
    roughly a quarter of the instances are tight.
    """
    if n is None:
        n = rng.randint(1, max_n)
    if tight is None:
        tight = rng.random() < 0.25

    rates = _random_rates(rng, n, integer, zero_prob)
    total = sum(rates, F(0))

    if tight and n >= 2 and total > 0:
        if integer:
            # Uplink = own rate, then spread the integer fan-out deficit around.
            uplink = list(rates)
            deficit = (n - 2) * total
            while deficit > 0:
                take = min(deficit, F(rng.randint(1, 3)))
                uplink[rng.randrange(n)] += take
                deficit -= take
        else:
            slacks = [F(rng.randint(1, 8), rng.randint(1, 6)) for _ in range(n)]
            factor = ((n - 2) * total) / sum(slacks)
            uplink = [r + s * factor for r, s in zip(rates, slacks)]
    else:
        if integer:
            uplink = [r + F(rng.randint(0, 4)) for r in rates]
        else:
            uplink = [r + _random_fraction(rng) for r in rates]
        deficit = (n - 1) * total - sum(uplink, F(0))
        if deficit > 0:
            uplink[rng.randrange(n)] += deficit

    downlink: list[Fraction | None] = []
    for i in range(n):
        peers = total - rates[i]
        roll = rng.random()
        if roll < 0.5:
            downlink.append(None)
        elif roll < 0.75:
            downlink.append(peers)  # exactly at capacity
        elif integer:
            downlink.append(peers + rng.randint(1, 4))
        else:
            downlink.append(peers + _random_fraction(rng))

    spec = NetworkSpec(uplink=tuple(uplink), downlink=tuple(downlink), rates=tuple(rates))
    report = is_sustainable(spec)
    assert report.sustainable, f"generator produced an unsustainable spec: {report.violations}"
    return spec


def random_violating_spec(rng: random.Random, condition: int) -> NetworkSpec:
    """A spec violating exactly the given condition and nothing else."""
    if condition == 1:
        n = rng.randint(2, 6)
        rates = [F(rng.randint(1, 5)) for _ in range(n)]
        uplink = [r + (n - 1) * sum(rates) for r in rates]
        bad = rng.randrange(n)
        uplink[bad] = rates[bad] - F(1, rng.randint(1, 4))
        if uplink[bad] < 0:
            uplink[bad] = F(0)
        downlink: list[Fraction | None] = [None] * n
    elif condition == 2:
        n = rng.randint(2, 6)
        rates = [F(rng.randint(1, 5)) for _ in range(n)]
        total = sum(rates, F(0))
        uplink = [r + (n - 1) * total for r in rates]
        downlink = [None] * n
        bad = rng.randrange(n)
        downlink[bad] = (total - rates[bad]) - F(1, rng.randint(1, 4))
        if downlink[bad] < 0:
            downlink[bad] = F(0)
    elif condition == 3:
        n = rng.randint(3, 6)
        rates = [F(rng.randint(1, 5)) for _ in range(n)]
        uplink = list(rates)  # condition 1 tight, aggregate hopelessly short
        downlink = [None] * n
    else:
        raise ValueError(condition)

    spec = NetworkSpec(uplink=tuple(uplink), downlink=tuple(downlink), rates=tuple(rates))
    report = is_sustainable(spec)
    assert report.violated_conditions() == {condition}, (
        f"wanted a pure condition-{condition} breach, got {report.violations}"
    )
    return spec
