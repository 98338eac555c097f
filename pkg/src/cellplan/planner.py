"""Outer planning loop: fill every place spot in declared order, each time
swarm-optimizing a base pose for every unpacked item of the type and
committing the item whose optimum is cheapest to travel to.

The cumulative clock advances by travel plus task duration after each
commitment, which is what lets the receding-horizon scaling see the human
where they will actually be. When every remaining item sits in the
full-stop band, the planner records a wait until the schedule moves the
human away, then retries the spot.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import AllInfeasible, AllInfinite, PlanInfeasible
from .humans import HumanSchedule, next_unblock_time, pose_xyz, scale_params
from .model import NormStats, Plan, PlanTask, PlanWait, PsoParams, Scenario
from .optimizer import BLOCKED, run_pso, select_travel
from .packing import PlacementLayout, layout_for
from .simulator import DigitalModel


def select_next_item(travel_times) -> tuple[float, int]:
    """Minimum travel time and its item index; ties go to the lower index."""
    times = np.asarray(travel_times, dtype=np.float64)
    if not np.any(np.isfinite(times)):
        raise AllInfinite("no candidate has a finite travel time")
    h = int(np.argmin(times))  # argmin returns the first (lowest) index on ties
    return float(times[h]), h


def plan(
    scenario: Scenario,
    layout: PlacementLayout | None,
    schedule: HumanSchedule,
    stats: NormStats,
    params: PsoParams | None = None,
    strategy: str = "pso",
    jobs: int = 1,
    kernel=None,
) -> Plan:
    """Run the full pipeline and return the committed plan."""
    if layout is None:
        layout = layout_for(scenario)
    params = params or scenario.pso
    model = DigitalModel(scenario, kernel=kernel, jobs=jobs)
    policy = scenario.scaling
    x0 = np.array(scenario.robot.base.start, dtype=np.float64)
    t_c = 0.0
    run_index = 0
    w = 1
    tasks: list[PlanTask] = []
    waits: list[PlanWait] = []
    best_fitness = math.inf

    for i, item in enumerate(scenario.items):
        t_w = stats.types[i].mu_time + stats.mu_travel
        packed: set[int] = set()
        place_boxes = layout.spots[i]
        for j, box_spots in enumerate(place_boxes):
            for k, spot in enumerate(box_spots):
                if len(packed) == item.count:
                    break
                run_index += 1
                while True:
                    try:
                        res = run_pso(
                            model, i, spot, packed, t_c, t_w, stats, schedule,
                            params, run_index, strategy,
                        )
                    except AllInfeasible as exc:
                        raise PlanInfeasible(f"type {i}, spot {k}: {exc}") from exc
                    travel = select_travel(model, res, x0)
                    try:
                        c_star, eta_star = select_next_item(travel)
                    except AllInfinite:
                        t_next = _earliest_unblock(
                            scenario, schedule, res, item, i, spot, t_c, t_w
                        )
                        if t_next is None:
                            raise PlanInfeasible(
                                f"type {i}, spot {k}: human never leaves the full-stop band"
                            ) from None
                        waits.append(PlanWait(start=t_c, end=t_next))
                        t_c = t_next
                        continue
                    break
                finite = res.best_fit[np.isfinite(res.best_fit)]
                if finite.size:
                    best_fitness = min(best_fitness, float(np.min(finite)))
                kappa = int(res.kappas[eta_star])
                t_pp = float(res.t_pp[eta_star])
                base_pose = tuple(float(v) for v in res.x_bar[eta_star])
                v, a = scale_params(
                    scenario.robot.tcp_speed, scenario.robot.tcp_accel, kappa, policy.levels
                )
                tasks.append(
                    PlanTask(
                        index=w,
                        item_type=i,
                        item=eta_star,
                        box=j,
                        spot=k,
                        base=base_pose,
                        kappa=kappa,
                        travel=c_star,
                        duration=t_pp,
                        start=t_c,
                        end=t_c + c_star + t_pp,
                        pick=item.pick_poses[eta_star],
                        place=spot,
                        speed=v,
                        accel=a,
                    )
                )
                packed.add(eta_star)
                x0 = np.asarray(res.x_bar[eta_star])
                t_c = t_c + c_star + t_pp
                w += 1
            if len(packed) == item.count:
                break
        if len(packed) < item.count:
            raise PlanInfeasible(f"type {i}: only {len(packed)}/{item.count} items placed")

    return Plan(
        scenario_name=scenario.name,
        seed=params.seed,
        weights=params.weights,
        base_start=tuple(float(v) for v in scenario.robot.base.start),
        tasks=tasks,
        waits=waits,
        best_fitness=best_fitness,
        sim_calls=model.calls,
        meta={"strategy": strategy, "schedule": schedule.name, "jobs": jobs},
    )


def _earliest_unblock(scenario, schedule, res, item, item_type, spot, t_c, t_w):
    blocked = [s for s, reason in res.failures.items() if reason == BLOCKED]
    if not blocked:
        return None
    place_pt = pose_xyz(spot, scenario.place_z(item_type))
    times = []
    for s in blocked:
        pick_pt = pose_xyz(item.pick_poses[s], scenario.pick_z(item_type))
        t = next_unblock_time(schedule, t_c, t_w, pick_pt, place_pt, scenario.scaling)
        if t is not None:
            times.append(t)
    return min(times) if times else None


def replay_plan(scenario: Scenario, the_plan: Plan, schedule: HumanSchedule, kernel=None):
    """Re-execute a committed plan with tracing; yields per-sample rows
    (t, tcp x/y/z, inverse manipulability, human-TCP distance, reference
    distance, kappa) plus per-task durations for consistency checks."""
    from .humans import human_position_at

    model = DigitalModel(scenario, kernel=kernel)
    rows = []
    durations = []
    for task in the_plan.tasks:
        result = model.simulate_pnp(
            task.base, task.pick, task.place, task.kappa, task.item_type, record_trace=True
        )
        durations.append(result.t_pp)
        t0 = task.start + task.travel
        pick_pt = pose_xyz(task.pick, scenario.pick_z(task.item_type))
        place_pt = pose_xyz(task.place, scenario.place_z(task.item_type))
        for (t, x, y, z, manip) in result.trace or ():
            t_abs = t0 + t
            hp = human_position_at(schedule, t_abs)
            if math.isinf(hp[0]):
                d_tcp = math.inf
                d_ref = math.inf
            else:
                d_tcp = math.sqrt((hp[0] - x) ** 2 + (hp[1] - y) ** 2 + (hp[2] - z) ** 2)
                d_ref = min(
                    math.sqrt(sum((a - b) ** 2 for a, b in zip(hp, pick_pt))),
                    math.sqrt(sum((a - b) ** 2 for a, b in zip(hp, place_pt))),
                )
            rows.append((t_abs, x, y, z, manip, d_tcp, d_ref, task.kappa))
    return rows, durations
