"""Command-line interface.

Subcommands: ``layout``, ``calibrate``, ``plan``, ``baseline``,
``simulate``. Every command is deterministic given its inputs and seed,
and writes a manifest recording the full configuration, the simulation
budget and the wall time. Exit codes: 0 ok, 1 bad input/IO, 2 infeasible,
3 optimizer/replay failure.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import os
import sys
import time
from pathlib import Path

import yaml

from . import __version__
from ._kernel import BACKEND
from .errors import (
    AllInfeasible,
    CellPlanError,
    LayoutInfeasible,
    PlanInfeasible,
    ScenarioError,
    TooFewSuccesses,
)
from .humans import load_schedule, offline_schedule
from .model import (
    Scenario,
    load_plan,
    load_scenario,
    load_stats,
    save_plan,
    save_stats,
    validate_scenario,
)
from .optimizer import calibrate
from .packing import layout_for
from .planner import plan as run_plan
from .planner import replay_plan
from .simulator import DigitalModel
from .svgout import gantt_svg, layout_svg

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INFEASIBLE = 2
EXIT_OPTIMIZER = 3

OUT_ENV = "CELLPLAN_OUT"


def _out_dir(args) -> Path:
    out = Path(args.out or os.environ.get(OUT_ENV, "."))
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_manifest(out: Path, name: str, config: dict, started: float, outputs: list[str],
                    sim_calls: int | None = None) -> None:
    manifest = {
        "command": name,
        "version": __version__,
        "backend": BACKEND,
        "config": config,
        "outputs": outputs,
        "wall_time_s": round(time.perf_counter() - started, 3),
    }
    if sim_calls is not None:
        manifest["sim_calls"] = sim_calls
    (out / f"{name}_manifest.yaml").write_text(yaml.safe_dump(manifest, sort_keys=False))


def _load_valid_scenario(path: str) -> Scenario:
    scenario = load_scenario(path)
    report = validate_scenario(scenario)
    if not report.ok:
        raise ScenarioError("invalid scenario:\n  " + "\n  ".join(report.violations))
    return scenario


def _resolve_schedule(args):
    if getattr(args, "human", None) == "offline":
        return offline_schedule()
    if not getattr(args, "schedule", None):
        raise ScenarioError("a schedule file (--schedule) or --human offline is required")
    return load_schedule(args.schedule)


def _apply_overrides(scenario: Scenario, args) -> Scenario:
    pso = scenario.pso
    changes = {}
    if getattr(args, "seed", None) is not None:
        changes["seed"] = args.seed
    if getattr(args, "weights", None) is not None:
        changes["weights"] = (args.weights[0], args.weights[1])
    if changes:
        pso = dataclasses.replace(pso, **changes)
        scenario = dataclasses.replace(scenario, pso=pso)
    return scenario


def cmd_layout(args) -> int:
    started = time.perf_counter()
    out = _out_dir(args)
    scenario = _load_valid_scenario(args.scenario)
    layout = layout_for(scenario)
    layout_file = out / "layout.yaml"
    layout_file.write_text(
        yaml.safe_dump(
            {
                "scenario": scenario.name,
                "alpha": [list(a) for a in layout.alpha],
                "spots": [
                    [[p.to_list() for p in box] for box in type_spots]
                    for type_spots in layout.spots
                ],
            },
            sort_keys=False,
        )
    )
    svg_file = out / "layout.svg"
    layout_svg(scenario, layout, svg_file)
    for i, a in enumerate(layout.alpha):
        print(f"type {i}: capacity {list(a)} for {scenario.items[i].count} items")
    _write_manifest(out, "layout", {"scenario": args.scenario}, started,
                    [layout_file.name, svg_file.name])
    return EXIT_OK


def cmd_calibrate(args) -> int:
    started = time.perf_counter()
    out = _out_dir(args)
    scenario = _apply_overrides(_load_valid_scenario(args.scenario), args)
    model = DigitalModel(scenario, jobs=args.jobs)
    stats, successes = calibrate(model, args.tests, scenario.pso.seed)
    stats_file = out / "stats.yaml"
    save_stats(stats, stats_file)
    for i, (ts, n_ok) in enumerate(zip(stats.types, successes)):
        print(
            f"type {i}: {n_ok}/{args.tests} feasible, "
            f"mu_t={ts.mu_time:.3f}s sigma_t={ts.sigma_time:.3f} "
            f"mu_d={ts.mu_delta:.3f} sigma_d={ts.sigma_delta:.3f}"
        )
    print(f"mu_travel={stats.mu_travel:.3f}s")
    _write_manifest(
        out, "calibrate",
        {"scenario": args.scenario, "tests": args.tests, "seed": scenario.pso.seed,
         "jobs": args.jobs},
        started, [stats_file.name], sim_calls=model.calls,
    )
    return EXIT_OK


def _run_planner(args, strategy: str, prefix: str) -> int:
    started = time.perf_counter()
    out = _out_dir(args)
    scenario = _apply_overrides(_load_valid_scenario(args.scenario), args)
    schedule = _resolve_schedule(args)
    stats = load_stats(args.stats)
    if len(stats.types) != len(scenario.items):
        raise ScenarioError("stats file does not match the scenario's item types")
    result = run_plan(
        scenario, None, schedule, stats,
        strategy=strategy, jobs=args.jobs,
    )
    result.meta["backend"] = BACKEND
    plan_file = out / f"{prefix}.yaml"
    save_plan(result, plan_file)
    gantt_file = out / f"{prefix}_gantt.svg"
    gantt_svg(result, schedule, scenario.scaling.levels, gantt_file)
    timeline_file = out / f"{prefix}_dmin.csv"
    rows, _ = replay_plan(scenario, result, schedule)
    with open(timeline_file, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "tcp_x", "tcp_y", "tcp_z", "inv_manip", "d_tcp", "d_ref", "kappa"])
        writer.writerows(rows)
    print(
        f"{prefix}: {len(result.tasks)} tasks, total {result.total_time:.2f}s, "
        f"best fitness {result.best_fitness:.3f}, {result.sim_calls} simulations"
    )
    print(f"kappa* = {result.kappa_star}")
    print(f"theta* = {result.theta_star}")
    _write_manifest(
        out, prefix,
        {
            "scenario": args.scenario,
            "schedule": getattr(args, "schedule", None) or "offline",
            "stats": args.stats,
            "seed": scenario.pso.seed,
            "weights": list(scenario.pso.weights),
            "strategy": strategy,
            "jobs": args.jobs,
        },
        started, [plan_file.name, gantt_file.name, timeline_file.name],
        sim_calls=result.sim_calls,
    )
    return EXIT_OK


def cmd_plan(args) -> int:
    return _run_planner(args, "pso", "plan")


def cmd_baseline(args) -> int:
    return _run_planner(args, "random", "baseline")


def cmd_simulate(args) -> int:
    started = time.perf_counter()
    out = _out_dir(args)
    scenario = _load_valid_scenario(args.scenario)
    schedule = _resolve_schedule(args)
    the_plan = load_plan(args.plan)
    rows, durations = replay_plan(scenario, the_plan, schedule)
    trace_file = out / "trace.csv"
    with open(trace_file, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "tcp_x", "tcp_y", "tcp_z", "inv_manip", "d_tcp", "d_ref", "kappa"])
        writer.writerows(rows)
    worst = max(
        (abs(d - t.duration) for d, t in zip(durations, the_plan.tasks)), default=0.0
    )
    print(f"replayed {len(the_plan.tasks)} tasks, max duration drift {worst:.2e}s")
    _write_manifest(
        out, "simulate",
        {"scenario": args.scenario, "plan": args.plan,
         "schedule": getattr(args, "schedule", None) or "offline"},
        started, [trace_file.name],
    )
    if worst > 1e-9:
        print("replay does not reproduce the plan timeline", file=sys.stderr)
        return EXIT_OPTIMIZER
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cellplan",
        description="Pre-deployment planning for a rail-mounted pick-and-place cell",
    )
    parser.add_argument("--version", action="version", version=f"cellplan {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, schedule=False, stats=False):
        p.add_argument("--scenario", required=True, help="scenario YAML file")
        p.add_argument("--out", default=None, help=f"output directory (or ${OUT_ENV})")
        p.add_argument("--jobs", type=int, default=1, help="parallel rollout workers")
        p.add_argument("--seed", type=int, default=None, help="override the scenario seed")
        if schedule:
            p.add_argument("--schedule", default=None, help="human schedule YAML file")
            p.add_argument("--human", choices=["offline"], default=None,
                           help="replace the schedule with an empty (offline) one")
        if stats:
            p.add_argument("--stats", required=True, help="normalization stats YAML file")
            p.add_argument("--weights", type=float, nargs=2, metavar=("W_T", "W_D"),
                           default=None, help="override the KPI weights")

    p_layout = sub.add_parser("layout", help="compute the place-side layout")
    common(p_layout)
    p_layout.set_defaults(func=cmd_layout)

    p_cal = sub.add_parser("calibrate", help="produce normalization statistics")
    common(p_cal)
    p_cal.add_argument("--tests", type=int, default=2000, help="random rollouts per type")
    p_cal.set_defaults(func=cmd_calibrate)

    p_plan = sub.add_parser("plan", help="optimize base poses, sequence and scaling")
    common(p_plan, schedule=True, stats=True)
    p_plan.set_defaults(func=cmd_plan)

    p_base = sub.add_parser("baseline", help="blind-search baseline at equal budget")
    common(p_base, schedule=True, stats=True)
    p_base.set_defaults(func=cmd_baseline)

    p_sim = sub.add_parser("simulate", help="replay a plan and emit its trace")
    common(p_sim, schedule=True)
    p_sim.add_argument("--plan", required=True, help="plan YAML file to replay")
    p_sim.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (LayoutInfeasible, PlanInfeasible) as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (AllInfeasible, TooFewSuccesses) as exc:
        print(f"optimizer failure: {exc}", file=sys.stderr)
        return EXIT_OPTIMIZER
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CellPlanError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_OPTIMIZER


if __name__ == "__main__":
    sys.exit(main())
