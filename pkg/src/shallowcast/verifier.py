"""Independent feasibility checks for transmission plans.

``verify_plan`` re-derives every capacity and delivery figure from the tree
list alone, never trusting the planner's matrix or usage vectors for those
checks, so a mismatch between trees and matrix is detectable. The brute-force
search is a separate existence oracle for small instances: it enumerates
discretized rate matrices directly and knows nothing about how the planner
splits streams.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional

from .model import NetworkSpec, format_rate
from .planner import TransmissionPlan

ZERO = Fraction(0)

CHECK_NAMES = (
    "valid_partition",
    "uplink_capacity",
    "downlink_capacity",
    "tree_height",
    "trace_nonnegative",
    "trace_row_completion",
    "trace_residual_bound",
    "throughput",
)


@dataclass(frozen=True)
class CheckFailure:
    """Exact locus and values of one failed assertion."""

    locus: str
    lhs: Optional[Fraction]
    rhs: Optional[Fraction]
    note: str = ""

    def describe(self) -> str:
        parts = [self.locus]
        if self.lhs is not None and self.rhs is not None:
            parts.append(f"{format_rate(self.lhs)} vs {format_rate(self.rhs)}")
        if self.note:
            parts.append(self.note)
        return ": ".join(parts)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    failures: tuple[CheckFailure, ...]


@dataclass(frozen=True)
class VerificationReport:
    passed: bool
    checks: tuple[CheckResult, ...]

    def check(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def failed_names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.checks if not c.passed)


def _check(name: str, failures: list[CheckFailure]) -> CheckResult:
    return CheckResult(name=name, passed=not failures, failures=tuple(failures))


def verify_plan(plan: TransmissionPlan) -> VerificationReport:
    """Run the full battery of correctness checks; failures are reported, never raised."""
    checks = (
        _check_valid_partition(plan),
        _check_uplink(plan),
        _check_downlink(plan),
        _check_tree_shapes(plan),
        _check_trace_nonnegative(plan),
        _check_trace_row_completion(plan),
        _check_trace_residual_bound(plan),
        _check_throughput(plan),
    )
    return VerificationReport(passed=all(c.passed for c in checks), checks=checks)


def _check_valid_partition(plan: TransmissionPlan) -> CheckResult:
    """Row sums of the matrix, and per-source tree rates, both equal the stream rate."""
    spec = plan.spec
    failures: list[CheckFailure] = []
    for i in range(spec.n):
        row = plan.matrix.row_sum(i)
        if row != spec.rates[i]:
            failures.append(
                CheckFailure(f"site {i}", row, spec.rates[i], "matrix row sum != stream rate")
            )
    if spec.n > 1:
        for i in range(spec.n):
            trees = sum((t.rate for t in plan.trees if t.source == i), ZERO)
            if trees != spec.rates[i]:
                failures.append(
                    CheckFailure(f"site {i}", trees, spec.rates[i], "tree rates != stream rate")
                )
    return _check("valid_partition", failures)


def _tree_uplink(plan: TransmissionPlan) -> list[Fraction]:
    usage = [ZERO] * plan.spec.n
    for tree in plan.trees:
        usage[tree.source] += tree.rate * tree.children_of(tree.source)
        if tree.relay is not None:
            usage[tree.relay] += tree.rate * len(tree.leaves)
    return usage


def _check_uplink(plan: TransmissionPlan) -> CheckResult:
    """Copies actually transmitted per the trees stay within each uplink."""
    failures: list[CheckFailure] = []
    for i, used in enumerate(_tree_uplink(plan)):
        cap = plan.spec.uplink[i]
        if used > cap:
            failures.append(CheckFailure(f"site {i}", used, cap, "uplink over capacity"))
    return _check("uplink_capacity", failures)


def _check_downlink(plan: TransmissionPlan) -> CheckResult:
    """Received volume fits each finite downlink and covers every peer stream exactly once."""
    spec = plan.spec
    n = spec.n
    received = [ZERO] * n
    per_pair = [[ZERO] * n for _ in range(n)]
    for tree in plan.trees:
        for site in tree.recipients:
            received[site] += tree.rate
            per_pair[tree.source][site] += tree.rate
    failures: list[CheckFailure] = []
    for i in range(n):
        cap = spec.downlink[i]
        if cap is not None and received[i] > cap:
            failures.append(CheckFailure(f"site {i}", received[i], cap, "downlink over capacity"))
    if n > 1:
        for src in range(n):
            for dst in range(n):
                if dst == src:
                    continue
                if per_pair[src][dst] != spec.rates[src]:
                    failures.append(
                        CheckFailure(
                            f"stream {src} at site {dst}",
                            per_pair[src][dst],
                            spec.rates[src],
                            "stream not delivered exactly once",
                        )
                    )
    return _check("downlink_capacity", failures)


def _check_tree_shapes(plan: TransmissionPlan) -> CheckResult:
    """Every tree is height <= 2 and spans exactly the non-source sites."""
    n = plan.spec.n
    everyone = frozenset(range(n))
    failures: list[CheckFailure] = []
    for idx, tree in enumerate(plan.trees):
        locus = f"tree {idx}"
        if tree.height > 2:
            failures.append(CheckFailure(locus, Fraction(tree.height), Fraction(2), "height above bound"))
        members = {tree.source, *tree.recipients}
        if members != everyone or len(tree.recipients) != n - 1:
            failures.append(CheckFailure(locus, None, None, "nodes do not partition the site set"))
        if tree.rate <= 0:
            failures.append(CheckFailure(locus, tree.rate, ZERO, "non-positive tree rate"))
    return _check("tree_height", failures)


def _check_trace_nonnegative(plan: TransmissionPlan) -> CheckResult:
    """Residual uplink never went negative at any point of the assignment."""
    failures: list[CheckFailure] = []
    for a, snapshot in enumerate(plan.trace.u_snapshots):
        for i, value in enumerate(snapshot):
            if value < 0:
                failures.append(
                    CheckFailure(f"snapshot {a} site {i}", value, ZERO, "residual uplink below zero")
                )
    return _check("trace_nonnegative", failures)


def _check_trace_row_completion(plan: TransmissionPlan) -> CheckResult:
    """Whenever enough residual uplink was available, the row was fully assigned."""
    spec = plan.spec
    fan = max(spec.n - 2, 0)
    failures: list[CheckFailure] = []
    for i in range(spec.n):
        available = sum(plan.trace.u_snapshots[i], ZERO)
        if available >= fan * spec.rates[i]:
            row = plan.matrix.row_sum(i)
            if row != spec.rates[i]:
                failures.append(
                    CheckFailure(
                        f"iteration {i}", row, spec.rates[i], "row left unfinished despite headroom"
                    )
                )
    return _check("trace_row_completion", failures)


def _check_trace_residual_bound(plan: TransmissionPlan) -> CheckResult:
    """Total residual uplink always covers the fan-out of the still-unassigned streams."""
    spec = plan.spec
    fan = max(spec.n - 2, 0)
    failures: list[CheckFailure] = []
    for a, snapshot in enumerate(plan.trace.u_snapshots):
        total = sum(snapshot, ZERO)
        needed = fan * sum(spec.rates[a:], ZERO)
        if total < needed:
            failures.append(
                CheckFailure(f"snapshot {a}", total, needed, "residual uplink below pending fan-out")
            )
    return _check("trace_residual_bound", failures)


def _check_throughput(plan: TransmissionPlan) -> CheckResult:
    """Total delivered rate over all trees is the aggregate optimum."""
    spec = plan.spec
    delivered = sum((t.rate * len(t.recipients) for t in plan.trees), ZERO)
    target = (spec.n - 1) * spec.total_rate
    failures: list[CheckFailure] = []
    if delivered != target:
        failures.append(CheckFailure("aggregate", delivered, target, "delivered rate != optimum"))
    return _check("throughput", failures)


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """All ways to write ``total`` as ``parts`` ordered non-negative integers, head descending."""
    if parts == 1:
        yield (total,)
        return
    for head in range(total, -1, -1):
        for rest in _compositions(total - head, parts - 1):
            yield (head, *rest)


def brute_force_feasibility(spec: NetworkSpec, granularity: int) -> bool:
    """Exhaustively decide whether any discretized rate matrix yields a feasible plan.

    Sub-stream rates are searched in steps of 1/granularity with row sums fixed
    to the stream rates, charging uplinks under the same two-hop tree semantics
    the planner uses. Only an existence check at its granularity: a feasible
    real-valued split finer than the grid will be missed.
    """
    if granularity < 1:
        raise ValueError("granularity must be a positive integer")
    n = spec.n
    if n > 4:
        raise ValueError(f"instance too large for exhaustive search (n={n} > 4)")
    for label, values in (("rate", spec.rates), ("uplink", spec.uplink), ("downlink", spec.downlink)):
        for v in values:
            if v is not None and (v * granularity).denominator != 1:
                raise ValueError(f"{label} {format_rate(v)} not representable at granularity {granularity}")
    if n == 1:
        return True

    for i in range(n):
        cap = spec.downlink[i]
        if cap is not None and spec.peer_rate_sum(i) > cap:
            return False

    fan = max(n - 2, 0)
    targets = [int(r * granularity) for r in spec.rates]
    caps = [c * granularity for c in spec.uplink]
    # Row candidates are cached per target; the head entry of each composition
    # is mapped onto the diagonal so direct broadcast is tried first.
    candidates: dict[int, list[tuple[int, ...]]] = {}

    def rows_for(target: int) -> list[tuple[int, ...]]:
        if target not in candidates:
            candidates[target] = list(_compositions(target, n))
        return candidates[target]

    used = [0] * n

    def place(i: int) -> bool:
        if i == n:
            return True
        others = [j for j in range(n) if j != i]
        for comp in rows_for(targets[i]):
            row = [0] * n
            row[i] = comp[0]
            for slot, j in enumerate(others):
                row[j] = comp[1 + slot]
            contrib = [fan * row[k] for k in range(n)]
            contrib[i] = (n - 1) * row[i] + sum(row[j] for j in others)
            if any(used[k] + contrib[k] > caps[k] for k in range(n)):
                continue
            for k in range(n):
                used[k] += contrib[k]
            if place(i + 1):
                return True
            for k in range(n):
                used[k] -= contrib[k]
        return False

    return place(0)
