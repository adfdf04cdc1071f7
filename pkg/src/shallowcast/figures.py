"""Matplotlib renderings for the report command.

Figures are presentation only: plotting coordinates are floats, but every
annotation shows the exact fraction, and the CSV/DOT outputs written next to
these files stay exact.
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .model import format_rate
from .planner import TransmissionPlan
from .simulator import SimMetrics


def _names(plan: TransmissionPlan, names: Optional[tuple[str, ...]]) -> list[str]:
    return list(names) if names else [f"v{i + 1}" for i in range(plan.spec.n)]


def usage_figure(
    plan: TransmissionPlan,
    metrics: SimMetrics,
    path: Path,
    names: Optional[tuple[str, ...]] = None,
) -> Path:
    """Per-site link usage against capacity, plus the per-round delivered rate."""
    labels = _names(plan, names)
    n = plan.spec.n
    xs = range(n)

    fig, (ax_links, ax_rounds) = plt.subplots(1, 2, figsize=(11, 4.2))

    up_used = [float(v) for v in plan.uplink_usage]
    up_cap = [float(v) for v in plan.spec.uplink]
    down_used = [float(v) for v in plan.downlink_usage]

    width = 0.35
    ax_links.bar([x - width / 2 for x in xs], up_used, width, label="uplink used", color="#1f77b4")
    ax_links.bar([x + width / 2 for x in xs], down_used, width, label="downlink used", color="#9edae5")
    ax_links.plot(xs, up_cap, "k_", markersize=22, label="uplink capacity")
    for x in xs:
        ax_links.annotate(
            format_rate(plan.uplink_usage[x]),
            (x - width / 2, up_used[x]),
            ha="center",
            va="bottom",
            fontsize=8,
        )
    ax_links.set_xticks(list(xs))
    ax_links.set_xticklabels(labels)
    ax_links.set_ylabel("rate")
    ax_links.set_title("steady-state link usage")
    ax_links.legend(fontsize=8)

    rounds = range(1, len(metrics.per_round_downlink) + 1)
    delivered = [float(sum(row)) for row in metrics.per_round_downlink]
    sent = [float(sum(row)) for row in metrics.per_round_uplink]
    ax_rounds.plot(list(rounds), delivered, "o-", label="delivered per round")
    ax_rounds.plot(list(rounds), sent, "s--", label="sent per round")
    ax_rounds.set_xlabel("round")
    ax_rounds.set_ylabel("rate")
    ax_rounds.set_title("warm-up and steady state")
    ax_rounds.legend(fontsize=8)

    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def matrix_figure(
    plan: TransmissionPlan,
    path: Path,
    names: Optional[tuple[str, ...]] = None,
) -> Path:
    """Heatmap of the sub-stream rate matrix, annotated with exact fractions."""
    labels = _names(plan, names)
    n = plan.matrix.n
    values = [[float(plan.matrix.entry(i, j)) for j in range(n)] for i in range(n)]

    fig, ax = plt.subplots(figsize=(1.2 * n + 2, 1.2 * n + 1.5))
    image = ax.imshow(values, cmap="Blues")
    for i in range(n):
        for j in range(n):
            rate = plan.matrix.entry(i, j)
            if rate == 0:
                continue
            ax.text(j, i, format_rate(rate), ha="center", va="center", fontsize=9)
    ax.set_xticks(range(n))
    ax.set_xticklabels(labels)
    ax.set_yticks(range(n))
    ax.set_yticklabels(labels)
    ax.set_xlabel("relay site")
    ax.set_ylabel("source site")
    ax.set_title("sub-stream rates")
    fig.colorbar(image, ax=ax, shrink=0.8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
