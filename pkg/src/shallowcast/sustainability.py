"""Feasibility conditions for all-to-all stream rates and the optimal uniform scale.

A rate vector is sustainable when three exact conditions hold:

1. every site's uplink covers its own stream rate,
2. every site's (finite) downlink covers the sum of all peer rates,
3. the aggregate uplink covers the (n-1)-fold fan-out of all streams.

A single-site network is trivially sustainable: there are no receivers, so
nothing ever needs to be transmitted.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .model import NetworkSpec, OptionalRate, format_rate

CONDITION_LABELS = {
    1: "per-site uplink covers own stream",
    2: "per-site downlink covers peer streams",
    3: "aggregate uplink covers (n-1)-fold fan-out",
}


@dataclass(frozen=True)
class Violation:
    """One exact condition breach: lhs > rhs as stated in the condition."""

    condition: int
    site: Optional[int]
    lhs: Fraction
    rhs: Fraction

    def describe(self, names: Optional[tuple[str, ...]] = None) -> str:
        lhs, rhs = format_rate(self.lhs), format_rate(self.rhs)
        if self.site is None:
            return f"condition {self.condition} violated: {lhs} > {rhs}"
        label = names[self.site] if names else f"site {self.site}"
        return f"condition {self.condition} violated at {label}: {lhs} > {rhs}"


@dataclass(frozen=True)
class SustainabilityReport:
    sustainable: bool
    violations: tuple[Violation, ...]

    def violated_conditions(self) -> set[int]:
        return {v.condition for v in self.violations}


def is_sustainable(spec: NetworkSpec) -> SustainabilityReport:
    """Check all three conditions exactly and report every breach, not just the first.

    Unbounded downlinks satisfy condition 2 vacuously. With one site all
    conditions are treated as trivially met, whatever the capacities.
    """
    if spec.n == 1:
        return SustainabilityReport(sustainable=True, violations=())

    violations: list[Violation] = []
    for i, (cap, rate) in enumerate(zip(spec.uplink, spec.rates)):
        if rate > cap:
            violations.append(Violation(condition=1, site=i, lhs=rate, rhs=cap))
    for i, cap in enumerate(spec.downlink):
        if cap is None:
            continue
        incoming = spec.peer_rate_sum(i)
        if incoming > cap:
            violations.append(Violation(condition=2, site=i, lhs=incoming, rhs=cap))
    fanout = (spec.n - 1) * spec.total_rate
    total_uplink = sum(spec.uplink, Fraction(0))
    if fanout > total_uplink:
        violations.append(Violation(condition=3, site=None, lhs=fanout, rhs=total_uplink))

    return SustainabilityReport(sustainable=not violations, violations=tuple(violations))


@dataclass(frozen=True)
class ConditionStatus:
    """Tightest margin of one condition: ok, tight (equality), violated or vacuous."""

    condition: int
    status: str
    site: Optional[int]
    lhs: Optional[Fraction]
    rhs: Optional[Fraction]


def _margin_status(lhs: Fraction, rhs: Fraction) -> str:
    if lhs > rhs:
        return "violated"
    if lhs == rhs:
        return "tight"
    return "ok"


def condition_summaries(spec: NetworkSpec) -> tuple[ConditionStatus, ...]:
    """Worst-case margin per condition, for human-readable reports."""
    if spec.n == 1:
        return tuple(
            ConditionStatus(condition=c, status="vacuous", site=None, lhs=None, rhs=None)
            for c in (1, 2, 3)
        )

    worst1 = max(range(spec.n), key=lambda i: spec.rates[i] - spec.uplink[i])
    cond1 = ConditionStatus(
        condition=1,
        status=_margin_status(spec.rates[worst1], spec.uplink[worst1]),
        site=worst1,
        lhs=spec.rates[worst1],
        rhs=spec.uplink[worst1],
    )

    finite = [i for i in range(spec.n) if spec.downlink[i] is not None]
    if not finite:
        cond2 = ConditionStatus(condition=2, status="vacuous", site=None, lhs=None, rhs=None)
    else:
        worst2 = max(finite, key=lambda i: spec.peer_rate_sum(i) - spec.downlink[i])
        cond2 = ConditionStatus(
            condition=2,
            status=_margin_status(spec.peer_rate_sum(worst2), spec.downlink[worst2]),
            site=worst2,
            lhs=spec.peer_rate_sum(worst2),
            rhs=spec.downlink[worst2],
        )

    fanout = (spec.n - 1) * spec.total_rate
    total_uplink = sum(spec.uplink, Fraction(0))
    cond3 = ConditionStatus(
        condition=3,
        status=_margin_status(fanout, total_uplink),
        site=None,
        lhs=fanout,
        rhs=total_uplink,
    )
    return (cond1, cond2, cond3)


def max_sustainable_scale(spec: NetworkSpec) -> OptionalRate:
    """Largest factor by which all stream rates can be scaled while staying sustainable.

    Every condition is linear in the rates, so the optimum is the minimum of
    the per-condition capacity/demand ratios. Returns ``None`` (unbounded)
    when no condition ever binds: all rates are zero, or the network has a
    single site.
    """
    if spec.n == 1:
        return None

    bounds: list[Fraction] = []
    for cap, rate in zip(spec.uplink, spec.rates):
        if rate > 0:
            bounds.append(cap / rate)
    for i, cap in enumerate(spec.downlink):
        if cap is None:
            continue
        incoming = spec.peer_rate_sum(i)
        if incoming > 0:
            bounds.append(cap / incoming)
    fanout = (spec.n - 1) * spec.total_rate
    if fanout > 0:
        bounds.append(sum(spec.uplink, Fraction(0)) / fanout)

    if not bounds:
        return None
    return min(bounds)
