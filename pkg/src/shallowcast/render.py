"""Text, CSV and DOT renderings of plans and simulation metrics.

Every number printed here is an exact fraction or integer; floats never
appear in delimited or graph output.
"""

from __future__ import annotations

import io
from typing import Optional

from .model import NetworkSpec, OverlayTree, format_rate
from .planner import TransmissionPlan
from .simulator import SimMetrics
from .sustainability import CONDITION_LABELS, SustainabilityReport, condition_summaries
from .verifier import VerificationReport


def _name(names: Optional[tuple[str, ...]], site: int) -> str:
    return names[site] if names else f"v{site + 1}"


def describe_tree(tree: OverlayTree, names: Optional[tuple[str, ...]] = None) -> str:
    src = _name(names, tree.source)
    if tree.relay is None:
        targets = ", ".join(_name(names, leaf) for leaf in tree.leaves)
        return f"{src} -> {targets}  rate {format_rate(tree.rate)}"
    targets = ", ".join(_name(names, leaf) for leaf in tree.leaves)
    return f"{src} via {_name(names, tree.relay)} -> {targets}  rate {format_rate(tree.rate)}"


def sustainability_text(
    report: SustainabilityReport,
    spec: Optional[NetworkSpec] = None,
    names: Optional[tuple[str, ...]] = None,
) -> str:
    lines = ["sustainable: yes" if report.sustainable else "sustainable: no"]
    if spec is not None:
        for cond in condition_summaries(spec):
            label = CONDITION_LABELS[cond.condition]
            if cond.status == "vacuous":
                detail = "vacuous"
            else:
                where = f" at {_name(names, cond.site)}" if cond.site is not None else ""
                relation = ">" if cond.status == "violated" else "<="
                detail = f"{cond.status}{where} ({format_rate(cond.lhs)} {relation} {format_rate(cond.rhs)})"
            lines.append(f"  condition {cond.condition} ({label}): {detail}")
    for v in report.violations:
        lines.append("  " + v.describe(names))
    return "\n".join(lines)


def sustainability_json(report: SustainabilityReport, names: Optional[tuple[str, ...]] = None) -> dict:
    return {
        "sustainable": report.sustainable,
        "violations": [
            {
                "condition": v.condition,
                "label": CONDITION_LABELS[v.condition],
                "site": None if v.site is None else _name(names, v.site),
                "lhs": format_rate(v.lhs),
                "rhs": format_rate(v.rhs),
            }
            for v in report.violations
        ],
    }


def matrix_text(plan: TransmissionPlan, names: Optional[tuple[str, ...]] = None) -> str:
    n = plan.matrix.n
    labels = [_name(names, i) for i in range(n)]
    cells = [[format_rate(plan.matrix.entry(i, j)) for j in range(n)] for i in range(n)]
    width = max(len(s) for row in ([labels] + cells) for s in row)
    out = ["sub-stream rates (row = source, column = relay):"]
    out.append("  " + " ".join(f"{'':>{width}}" if k == 0 else f"{labels[k - 1]:>{width}}" for k in range(n + 1)))
    for i in range(n):
        out.append("  " + " ".join([f"{labels[i]:>{width}}"] + [f"{c:>{width}}" for c in cells[i]]))
    return "\n".join(out)


def plan_text(plan: TransmissionPlan, names: Optional[tuple[str, ...]] = None, trace: bool = False) -> str:
    lines = [matrix_text(plan, names)]
    if plan.trees:
        lines.append("trees:")
        for tree in plan.trees:
            lines.append("  " + describe_tree(tree, names))
    else:
        lines.append("empty plan (no receivers)")
    lines.append("per-site usage:")
    for i in range(plan.spec.n):
        lines.append(
            f"  {_name(names, i)}: uplink {format_rate(plan.uplink_usage[i])}"
            f"/{format_rate(plan.spec.uplink[i])}"
            f", downlink {format_rate(plan.downlink_usage[i])}"
            f"/{format_rate(plan.spec.downlink[i])}"
        )
    if trace:
        lines.append("residual uplink snapshots:")
        for a, snap in enumerate(plan.trace.u_snapshots):
            values = " ".join(format_rate(v) for v in snap)
            lines.append(f"  [{a}] {values}")
    return "\n".join(lines)


def verification_text(report: VerificationReport) -> str:
    lines = [f"verification: {'passed' if report.passed else 'FAILED'}"]
    for check in report.checks:
        status = "ok" if check.passed else "FAIL"
        lines.append(f"  {check.name}: {status}")
        for failure in check.failures:
            lines.append(f"    {failure.describe()}")
    return "\n".join(lines)


def matrix_csv(plan: TransmissionPlan) -> str:
    buf = io.StringIO()
    buf.write("i,j,rate\n")
    n = plan.matrix.n
    for i in range(n):
        for j in range(n):
            buf.write(f"{i},{j},{format_rate(plan.matrix.entry(i, j))}\n")
    return buf.getvalue()


def simulation_csv(metrics: SimMetrics, names: Optional[tuple[str, ...]] = None) -> str:
    buf = io.StringIO()
    buf.write("site,round,uplink_used,downlink_used\n")
    rounds = len(metrics.per_round_uplink)
    n = len(metrics.per_round_uplink[0]) if rounds else 0
    for i in range(n):
        for t in range(rounds):
            buf.write(
                f"{_name(names, i)},{t + 1},"
                f"{format_rate(metrics.per_round_uplink[t][i])},"
                f"{format_rate(metrics.per_round_downlink[t][i])}\n"
            )
    return buf.getvalue()


def tree_dot(tree: OverlayTree, index: int, names: Optional[tuple[str, ...]] = None) -> str:
    """One digraph per tree; node labels are site names, edge labels the rate."""
    rate = format_rate(tree.rate)
    lines = [f"digraph tree_{index} {{"]
    lines.append(f'  label="stream {_name(names, tree.source)} slice, rate {rate}";')
    src = _name(names, tree.source)
    if tree.relay is None:
        for leaf in tree.leaves:
            lines.append(f'  "{src}" -> "{_name(names, leaf)}" [label="{rate}"];')
    else:
        relay = _name(names, tree.relay)
        lines.append(f'  "{src}" -> "{relay}" [label="{rate}"];')
        for leaf in tree.leaves:
            lines.append(f'  "{relay}" -> "{_name(names, leaf)}" [label="{rate}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def combined_dot(plan: TransmissionPlan, names: Optional[tuple[str, ...]] = None) -> str:
    """All trees in one digraph, one cluster each, nodes suffixed per cluster."""
    lines = ["digraph plan {"]
    for idx, tree in enumerate(plan.trees):
        rate = format_rate(tree.rate)
        lines.append(f"  subgraph cluster_{idx} {{")
        lines.append(f'    label="stream {_name(names, tree.source)} slice, rate {rate}";')

        def node(site: int) -> str:
            return f"t{idx}_{site}"

        members = [tree.source, *tree.recipients]
        for site in members:
            lines.append(f'    {node(site)} [label="{_name(names, site)}"];')
        src = node(tree.source)
        if tree.relay is None:
            for leaf in tree.leaves:
                lines.append(f'    {src} -> {node(leaf)} [label="{rate}"];')
        else:
            relay = node(tree.relay)
            lines.append(f'    {src} -> {relay} [label="{rate}"];')
            for leaf in tree.leaves:
                lines.append(f'    {relay} -> {node(leaf)} [label="{rate}"];')
        lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"
