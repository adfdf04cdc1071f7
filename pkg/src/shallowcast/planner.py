"""Greedy sub-stream rate assignment and height-limited overlay tree construction.

Each site's stream is split into n sub-streams: the diagonal slice is
broadcast directly to all peers, and slice (i, j) with i != j travels to site
j first, which fans it out to everyone else. The assignment walks site pairs
in index order, and for each sub-stream takes as much of the target site's
residual uplink as it can, until the whole stream rate is placed. The residual
uplink of every site starts at capacity minus the reserved slice needed to
emit its own stream once.

The planner refuses unsustainable inputs up front; on sustainable inputs the
produced plan satisfies the verifier's full battery of checks by construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .model import NetworkSpec, OverlayTree, SubstreamMatrix
from .sustainability import SustainabilityReport, is_sustainable

ZERO = Fraction(0)


class UnsustainableError(ValueError):
    """Raised when asked to plan for rates the network cannot carry."""

    def __init__(self, report: SustainabilityReport):
        self.report = report
        conditions = ", ".join(str(c) for c in sorted(report.violated_conditions()))
        super().__init__(f"rates are not sustainable (violated conditions: {conditions})")


@dataclass(frozen=True)
class AlgorithmTrace:
    """Per-iteration residual-uplink state recorded while assigning rates.

    ``u_snapshots[k]`` is the residual-uplink vector at the start of outer
    iteration k (0-based), with one extra final snapshot after the last
    iteration, so there are n+1 snapshots and ``u_snapshots[0] == u_initial``.
    ``r_prime_history[i]`` holds stream i's still-unassigned rate after each
    inner step of iteration i.
    """

    u_initial: tuple[Fraction, ...]
    u_snapshots: tuple[tuple[Fraction, ...], ...]
    r_prime_history: tuple[tuple[Fraction, ...], ...]


@dataclass(frozen=True)
class TransmissionPlan:
    """A complete, checkable dissemination plan for one network."""

    spec: NetworkSpec
    matrix: SubstreamMatrix
    trees: tuple[OverlayTree, ...]
    uplink_usage: tuple[Fraction, ...]
    downlink_usage: tuple[Fraction, ...]
    trace: AlgorithmTrace


def assign_substream_rates(spec: NetworkSpec) -> tuple[SubstreamMatrix, AlgorithmTrace]:
    """Split every stream into per-relay sub-stream rates, greedily, in index order.

    Relaying one rate unit of stream i via site j costs j a fan-out of n-2
    copies, so sub-stream (i, j) is capped at the residual uplink of j divided
    by n-2. With one or two sites that factor is <= 0, the cap never binds,
    and every stream lands whole in its first column. All arithmetic is exact
    and the row sums equal the stream rates exactly.
    """
    report = is_sustainable(spec)
    if not report.sustainable:
        raise UnsustainableError(report)

    n = spec.n
    fanout = max(n - 2, 0)
    r = [[ZERO] * n for _ in range(n)]
    if n == 1:
        # Nothing is ever emitted, so no uplink is reserved for the own stream.
        u = list(spec.uplink)
    else:
        u = [cap - rate for cap, rate in zip(spec.uplink, spec.rates)]

    u_initial = tuple(u)
    u_snapshots = [u_initial]
    r_prime_history: list[tuple[Fraction, ...]] = []

    for i in range(n):
        remaining = spec.rates[i]
        steps: list[Fraction] = []
        for j in range(n):
            if fanout * remaining > u[j]:
                r[i][j] = u[j] / fanout
            else:
                r[i][j] = remaining
            u[j] -= fanout * r[i][j]
            remaining -= r[i][j]
            steps.append(remaining)
            if remaining == 0:
                break
        r_prime_history.append(tuple(steps))
        u_snapshots.append(tuple(u))

    matrix = SubstreamMatrix(rows=tuple(tuple(row) for row in r))
    trace = AlgorithmTrace(
        u_initial=u_initial,
        u_snapshots=tuple(u_snapshots),
        r_prime_history=tuple(r_prime_history),
    )
    return matrix, trace


def build_overlay_trees(matrix: SubstreamMatrix) -> tuple[OverlayTree, ...]:
    """Materialize one broadcast tree per strictly positive sub-stream rate.

    Diagonal entries become height-1 direct fan-outs; off-diagonal entries
    become height-2 relay trees. A two-site relay tree has nobody left to fan
    out to and is normalized to a direct tree; a one-site network produces no
    trees at all.
    """
    n = matrix.n
    sites = range(n)
    trees: list[OverlayTree] = []
    for i in sites:
        for j in sites:
            rate = matrix.entry(i, j)
            if rate == 0:
                continue
            if i == j:
                leaves = tuple(k for k in sites if k != i)
                if not leaves:
                    continue
                trees.append(OverlayTree(source=i, relay=None, leaves=leaves, rate=rate))
            else:
                leaves = tuple(k for k in sites if k != i and k != j)
                if not leaves:
                    trees.append(OverlayTree(source=i, relay=None, leaves=(j,), rate=rate))
                else:
                    trees.append(OverlayTree(source=i, relay=j, leaves=leaves, rate=rate))
    return tuple(trees)


def uplink_usage_from_matrix(spec: NetworkSpec, matrix: SubstreamMatrix) -> tuple[Fraction, ...]:
    """Per-site uplink consumption implied by a rate matrix.

    Site i pays (n-1) copies for its direct slice, one first-hop copy for each
    slice it hands off, and n-2 fan-out copies for every other stream's slice
    relayed through it.
    """
    n = spec.n
    usage = []
    for i in range(n):
        own = (n - 1) * matrix.entry(i, i)
        first_hops = sum((matrix.entry(i, j) for j in range(n) if j != i), ZERO)
        relayed = sum((matrix.entry(j, i) for j in range(n) if j != i), ZERO)
        usage.append(own + first_hops + max(n - 2, 0) * relayed)
    return tuple(usage)


def downlink_usage(spec: NetworkSpec) -> tuple[Fraction, ...]:
    """Per-site downlink consumption: every peer's full stream, exactly once."""
    return tuple(spec.peer_rate_sum(i) for i in range(spec.n))


def plan(spec: NetworkSpec) -> TransmissionPlan:
    """Assign rates, build trees and derive usage for a sustainable network."""
    matrix, trace = assign_substream_rates(spec)
    trees = build_overlay_trees(matrix)
    return TransmissionPlan(
        spec=spec,
        matrix=matrix,
        trees=trees,
        uplink_usage=uplink_usage_from_matrix(spec, matrix),
        downlink_usage=downlink_usage(spec),
        trace=trace,
    )
