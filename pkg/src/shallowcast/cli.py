"""Command-line interface.

Exit codes separate model infeasibility from operator and internal errors:
0 success, 1 rates not sustainable, 2 unreadable/invalid input, 3 the plan
failed our own verification (always a bug), 4 a capacity assertion fired
during simulation (likewise a bug on verified plans).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional

from . import render
from .model import format_rate
from .planner import TransmissionPlan, UnsustainableError, plan
from .simulator import CapacityExceededError, SimConfig, compare_aggregate_throughput, simulate
from .specfile import SpecFileError, load_spec_file
from .sustainability import is_sustainable, max_sustainable_scale
from .verifier import verify_plan

EXIT_OK = 0
EXIT_UNSUSTAINABLE = 1
EXIT_INPUT = 2
EXIT_VERIFY = 3
EXIT_SIMULATION = 4


def _load(path: str):
    try:
        return load_spec_file(path)
    except SpecFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_INPUT)


def _planned(path: str) -> tuple[TransmissionPlan, tuple[str, ...]]:
    spec, names = _load(path)
    try:
        result = plan(spec)
    except UnsustainableError as exc:
        print(render.sustainability_text(exc.report, spec, names))
        print("rates are not sustainable; try `shallowcast scale` for the feasible scale factor")
        raise SystemExit(EXIT_UNSUSTAINABLE)
    report = verify_plan(result)
    if not report.passed:
        print(render.verification_text(report), file=sys.stderr)
        print("internal error: produced plan failed verification", file=sys.stderr)
        raise SystemExit(EXIT_VERIFY)
    return result, names


def cmd_check(args: argparse.Namespace) -> int:
    spec, names = _load(args.spec)
    report = is_sustainable(spec)
    print(render.sustainability_text(report, spec, names))
    if args.json:
        Path(args.json).write_text(
            json.dumps(render.sustainability_json(report, names), indent=2) + "\n", encoding="utf-8"
        )
    return EXIT_OK if report.sustainable else EXIT_UNSUSTAINABLE


def cmd_plan(args: argparse.Namespace) -> int:
    result, names = _planned(args.spec)
    print(render.plan_text(result, names, trace=args.trace))
    if args.csv:
        Path(args.csv).write_text(render.matrix_csv(result), encoding="utf-8")
    if args.dot:
        dot_dir = Path(args.dot)
        dot_dir.mkdir(parents=True, exist_ok=True)
        for idx, tree in enumerate(result.trees):
            (dot_dir / f"tree_{idx:02d}.dot").write_text(
                render.tree_dot(tree, idx, names), encoding="utf-8"
            )
        (dot_dir / "combined.dot").write_text(render.combined_dot(result, names), encoding="utf-8")
    return EXIT_OK


def cmd_scale(args: argparse.Namespace) -> int:
    spec, names = _load(args.spec)
    theta = max_sustainable_scale(spec)
    if theta is None:
        print("max sustainable scale: unbounded")
        return EXIT_OK
    print(f"max sustainable scale: {format_rate(theta)}")
    scaled = spec.scaled(theta)
    for i, name in enumerate(names):
        print(f"  {name}: rate {format_rate(spec.rates[i])} -> {format_rate(scaled.rates[i])}")
    return EXIT_OK


def _simulated(args: argparse.Namespace):
    if args.rounds < 2:
        print(f"error: --rounds must be at least 2, got {args.rounds}", file=sys.stderr)
        raise SystemExit(EXIT_INPUT)
    result, names = _planned(args.spec)
    config = SimConfig(rounds=args.rounds)
    try:
        metrics = simulate(result, config)
    except CapacityExceededError as exc:
        print(f"simulation assertion: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_SIMULATION)
    return result, names, metrics


def cmd_simulate(args: argparse.Namespace) -> int:
    result, names, metrics = _simulated(args)
    goodput = compare_aggregate_throughput(metrics, result.spec)
    last_up = metrics.per_round_uplink[-1]
    last_down = metrics.per_round_downlink[-1]
    print(f"rounds simulated: {args.rounds}")
    print("steady-state usage per round:")
    for i, name in enumerate(names):
        print(f"  {name}: uplink {format_rate(last_up[i])}, downlink {format_rate(last_down[i])}")
    print(f"max delivery hops: {metrics.max_delivery_hops}")
    print(f"aggregate goodput per round: {format_rate(goodput)}")
    if args.csv:
        Path(args.csv).write_text(render.simulation_csv(metrics, names), encoding="utf-8")
    return EXIT_OK


def cmd_report(args: argparse.Namespace) -> int:
    from . import figures

    result, names, metrics = _simulated(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    (out / "matrix.csv").write_text(render.matrix_csv(result), encoding="utf-8")
    (out / "simulation.csv").write_text(render.simulation_csv(metrics, names), encoding="utf-8")
    (out / "trees.dot").write_text(render.combined_dot(result, names), encoding="utf-8")
    usage_png = figures.usage_figure(result, metrics, out / "usage.png", names)
    matrix_png = figures.matrix_figure(result, out / "matrix.png", names)

    goodput = compare_aggregate_throughput(metrics, result.spec)
    summary = {
        "sites": list(names),
        "sustainable": True,
        "max_delivery_hops": metrics.max_delivery_hops,
        "aggregate_goodput_per_round": format_rate(goodput),
        "uplink_usage": [format_rate(v) for v in result.uplink_usage],
        "downlink_usage": [format_rate(v) for v in result.downlink_usage],
        "tree_count": len(result.trees),
        "files": ["matrix.csv", "simulation.csv", "trees.dot", usage_png.name, matrix_png.name],
    }
    (out / "summary.json").write_text(json.dumps(summary, indent=2) + "\n", encoding="utf-8")

    print(render.plan_text(result, names))
    print(f"max delivery hops: {metrics.max_delivery_hops}")
    print(f"aggregate goodput per round: {format_rate(goodput)}")
    print(f"report written to {out}/ ({', '.join(summary['files'])})")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shallowcast",
        description="Plan, verify and simulate all-to-all dissemination over height-limited overlay trees.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="check whether the stream rates are sustainable")
    p_check.add_argument("spec", help="network description (JSON)")
    p_check.add_argument("--json", metavar="FILE", help="also write the report as JSON")
    p_check.set_defaults(func=cmd_check)

    p_plan = sub.add_parser("plan", help="compute the sub-stream rates and overlay trees")
    p_plan.add_argument("spec", help="network description (JSON)")
    p_plan.add_argument("--dot", metavar="DIR", help="write one DOT file per tree plus a combined file")
    p_plan.add_argument("--csv", metavar="FILE", help="write the rate matrix as CSV")
    p_plan.add_argument("--trace", action="store_true", help="print residual-uplink snapshots")
    p_plan.set_defaults(func=cmd_plan)

    p_scale = sub.add_parser("scale", help="largest uniform rate scale the network sustains")
    p_scale.add_argument("spec", help="network description (JSON)")
    p_scale.set_defaults(func=cmd_scale)

    p_sim = sub.add_parser("simulate", help="run the plan round by round and report metrics")
    p_sim.add_argument("spec", help="network description (JSON)")
    p_sim.add_argument("--rounds", type=int, default=10, metavar="N", help="simulation horizon (default 10)")
    p_sim.add_argument("--csv", metavar="FILE", help="write per-round per-site usage as CSV")
    p_sim.set_defaults(func=cmd_simulate)

    p_report = sub.add_parser("report", help="plan, simulate, and render figures plus CSV/DOT to a directory")
    p_report.add_argument("spec", help="network description (JSON)")
    p_report.add_argument("--out", default="report", metavar="DIR", help="output directory (default ./report)")
    p_report.add_argument("--rounds", type=int, default=10, metavar="N", help="simulation horizon (default 10)")
    p_report.set_defaults(func=cmd_report)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
