"""Round-based fluid execution of a transmission plan.

Each round every source injects one batch per tree (volume = tree rate x
batch unit). First-hop transfers happen in the batch's injection round;
relay fan-out happens one round later, so round 1 is a warm-up and rounds
t >= 2 are steady state. Charges are rates and are compared against
capacities every round; exceeding a capacity aborts the run, which on a
verified plan would indicate a planner or verifier bug.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .model import NetworkSpec, format_rate
from .planner import TransmissionPlan

ZERO = Fraction(0)
ONE = Fraction(1)


class CapacityExceededError(RuntimeError):
    """A per-round charge went over a site's link capacity."""

    def __init__(self, round_no: int, site: int, direction: str, used: Fraction, capacity: Fraction):
        self.round_no = round_no
        self.site = site
        self.direction = direction
        self.used = used
        self.capacity = capacity
        super().__init__(
            f"round {round_no}: site {site} {direction} overage "
            f"{format_rate(used - capacity)} ({format_rate(used)} > {format_rate(capacity)})"
        )


@dataclass(frozen=True)
class SimConfig:
    """Horizon and batch sizing. Two rounds minimum: a relay hop needs a second round."""

    rounds: int
    batch_unit: Fraction = ONE

    def __post_init__(self) -> None:
        if self.rounds < 2:
            raise ValueError(f"rounds must be >= 2, got {self.rounds}")
        if self.batch_unit <= 0:
            raise ValueError("batch_unit must be positive")


@dataclass(frozen=True)
class SimMetrics:
    """Per-round link charges plus end-of-horizon delivery figures.

    ``delivered_fraction[i][k]`` is the share of stream i's injected volume
    that reached site k by the horizon (1 on the diagonal and for zero-rate
    streams); ``aggregate_goodput`` is the steady-state delivered rate per
    round summed over all sites.
    """

    per_round_uplink: tuple[tuple[Fraction, ...], ...]
    per_round_downlink: tuple[tuple[Fraction, ...], ...]
    max_delivery_hops: int
    delivered_fraction: tuple[tuple[Fraction, ...], ...]
    aggregate_goodput: Fraction


def simulate(plan: TransmissionPlan, config: SimConfig) -> SimMetrics:
    """Run the plan for the configured horizon and collect exact metrics."""
    spec = plan.spec
    n = spec.n
    batch = config.batch_unit

    per_round_up: list[tuple[Fraction, ...]] = []
    per_round_down: list[tuple[Fraction, ...]] = []
    delivered = [[ZERO] * n for _ in range(n)]
    max_hops = 0

    relay_trees = [t for t in plan.trees if t.relay is not None]

    for round_no in range(1, config.rounds + 1):
        up = [ZERO] * n
        down = [ZERO] * n

        # Relay fan-out of the batches injected last round.
        if round_no >= 2:
            for tree in relay_trees:
                up[tree.relay] += tree.rate * len(tree.leaves)
                for leaf in tree.leaves:
                    down[leaf] += tree.rate
                    delivered[tree.source][leaf] += tree.rate * batch
                if tree.leaves:
                    max_hops = max(max_hops, 2)

        # First hop of this round's fresh batches.
        for tree in plan.trees:
            if tree.relay is not None:
                up[tree.source] += tree.rate
                down[tree.relay] += tree.rate
                delivered[tree.source][tree.relay] += tree.rate * batch
                max_hops = max(max_hops, 1)
            else:
                up[tree.source] += tree.rate * len(tree.leaves)
                for leaf in tree.leaves:
                    down[leaf] += tree.rate
                    delivered[tree.source][leaf] += tree.rate * batch
                if tree.leaves:
                    max_hops = max(max_hops, 1)

        for i in range(n):
            if up[i] > spec.uplink[i]:
                raise CapacityExceededError(round_no, i, "uplink", up[i], spec.uplink[i])
            cap = spec.downlink[i]
            if cap is not None and down[i] > cap:
                raise CapacityExceededError(round_no, i, "downlink", down[i], cap)

        per_round_up.append(tuple(up))
        per_round_down.append(tuple(down))

    fractions_out: list[tuple[Fraction, ...]] = []
    horizon_volume = {i: spec.rates[i] * batch * config.rounds for i in range(n)}
    for i in range(n):
        row = []
        for k in range(n):
            if i == k or spec.rates[i] == 0:
                row.append(ONE)
            else:
                row.append(delivered[i][k] / horizon_volume[i])
        fractions_out.append(tuple(row))

    goodput = sum(per_round_down[-1], ZERO)

    return SimMetrics(
        per_round_uplink=tuple(per_round_up),
        per_round_downlink=tuple(per_round_down),
        max_delivery_hops=max_hops,
        delivered_fraction=tuple(fractions_out),
        aggregate_goodput=goodput,
    )


def optimal_aggregate_rate(spec: NetworkSpec) -> Fraction:
    """The best possible total delivery rate: every stream reaching all n-1 peers."""
    return (spec.n - 1) * spec.total_rate


def compare_aggregate_throughput(metrics: SimMetrics, spec: NetworkSpec) -> Fraction:
    """Cross-check and return the steady-state goodput.

    Recomputes the goodput from the final round's downlink charges and insists
    it matches the recorded metric; callers compare the result against
    :func:`optimal_aggregate_rate`, which it equals for verified plans.
    """
    recomputed = sum(metrics.per_round_downlink[-1], ZERO)
    if recomputed != metrics.aggregate_goodput:
        raise AssertionError(
            f"inconsistent goodput accounting: {recomputed} != {metrics.aggregate_goodput}"
        )
    return metrics.aggregate_goodput
