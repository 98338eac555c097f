"""Deterministic human work schedule and the distance-based speed scaling.

The schedule is the planner's view of the ERP output: timed, positioned
tasks. Positions are piecewise constant; an ``Offline`` task carries an
unbounded position marker, which always maps to scaling level 0.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from pathlib import Path

import yaml

from .errors import BadKappa, ScenarioError
from .geometry import PlanarPose
from .model import UNBOUNDED, ScalingPolicy

OFFLINE_KIND = "Offline"
OFFLINE_POSITION = (math.inf, math.inf, math.inf)


@dataclass(frozen=True)
class HumanTask:
    kind: str
    station: str | None
    start: float
    position: tuple[float, float, float]


@dataclass(frozen=True)
class HumanSchedule:
    name: str
    tasks: tuple[HumanTask, ...]
    horizon_end: float

    def __post_init__(self):
        starts = [t.start for t in self.tasks]
        if any(b <= a for a, b in zip(starts, starts[1:])):
            raise ScenarioError("task start times must be strictly increasing")
        for t in self.tasks:
            if t.kind == OFFLINE_KIND and not all(math.isinf(v) for v in t.position):
                raise ScenarioError("Offline tasks carry the unbounded position marker")

    @property
    def starts(self) -> list[float]:
        return [t.start for t in self.tasks]


def offline_schedule() -> HumanSchedule:
    """Human-out-of-the-loop schedule: one Offline task from t=0."""
    return HumanSchedule(
        name="offline",
        tasks=(HumanTask(OFFLINE_KIND, None, 0.0, OFFLINE_POSITION),),
        horizon_end=0.0,
    )


def human_position_at(schedule: HumanSchedule, t: float) -> tuple[float, float, float]:
    """Operator position at time t (piecewise constant, left-closed tasks).

    Before the first task the position is unknown and reported unbounded;
    after the last start the final task's position persists.
    """
    starts = schedule.starts
    if not starts or t < starts[0]:
        return OFFLINE_POSITION
    return schedule.tasks[bisect_right(starts, t) - 1].position


def tasks_in_window(schedule: HumanSchedule, t_c: float, t_w: float) -> list[int]:
    """Indices of tasks whose active interval intersects [t_c, t_c + t_w)."""
    if t_w <= 0:
        raise ValueError("window length must be positive")
    out = []
    starts = schedule.starts
    for c, start in enumerate(starts):
        nxt = starts[c + 1] if c + 1 < len(starts) else math.inf
        if start < t_c + t_w and nxt > t_c:
            out.append(c)
    return out


def _dist(a, b) -> float:
    if any(math.isinf(v) for v in a):
        return math.inf
    return math.sqrt((a[0] - b[0]) ** 2 + (a[1] - b[1]) ** 2 + (a[2] - b[2]) ** 2)


def min_task_distance(
    schedule: HumanSchedule,
    t_c: float,
    t_w: float,
    pick: tuple[float, float, float],
    place: tuple[float, float, float],
) -> float:
    """Smallest distance from any in-window human position to pick or place."""
    d_min = math.inf
    for c in tasks_in_window(schedule, t_c, t_w):
        p = schedule.tasks[c].position
        d_min = min(d_min, _dist(p, pick), _dist(p, place))
    return d_min


def receding_horizon_scale(
    schedule: HumanSchedule,
    t_c: float,
    t_w: float,
    pick: tuple[float, float, float],
    place: tuple[float, float, float],
    policy: ScalingPolicy,
) -> int:
    """Scaling level for a task starting near t_c, looking t_w ahead."""
    return policy.band_of(min_task_distance(schedule, t_c, t_w, pick, place))


def next_unblock_time(
    schedule: HumanSchedule,
    t_c: float,
    t_w: float,
    pick: tuple[float, float, float],
    place: tuple[float, float, float],
    policy: ScalingPolicy,
) -> float | None:
    """Earliest t > t_c at which the scale drops below the full-stop level.

    The scale can only relax when a task leaves the look-ahead window,
    which happens exactly at a successor task's start time.
    """
    full_stop = policy.levels - 1
    for start in schedule.starts:
        if start <= t_c:
            continue
        if receding_horizon_scale(schedule, start, t_w, pick, place, policy) < full_stop:
            return start
    return None


def scale_params(v_r: float, a_r: float, kappa: int, n_k: int) -> tuple[float, float]:
    """TCP speed/acceleration linearly reduced by the scaling level.

    Level 0 keeps the maxima; level n_k - 1 stops the robot entirely.
    """
    if n_k < 2:
        raise BadKappa(f"need at least two levels, got {n_k}")
    if not 0 <= kappa <= n_k - 1:
        raise BadKappa(f"kappa {kappa} outside [0, {n_k - 1}]")
    v = v_r - kappa * v_r / (n_k - 1)
    a = a_r - kappa * a_r / (n_k - 1)
    return v, a


# -- schedule file IO ---------------------------------------------------------


def load_schedule(path: str | Path) -> HumanSchedule:
    try:
        raw = yaml.safe_load(Path(path).read_text())
    except (OSError, yaml.YAMLError) as exc:
        raise ScenarioError(f"cannot read schedule {path}: {exc}") from exc
    if not isinstance(raw, dict) or "tasks" not in raw:
        raise ScenarioError(f"schedule {path} must be a mapping with a tasks list")
    tasks = []
    for idx, t in enumerate(raw["tasks"]):
        kind = str(t["kind"])
        pos_raw = t.get("position", UNBOUNDED if kind == OFFLINE_KIND else None)
        if pos_raw == UNBOUNDED:
            pos = OFFLINE_POSITION
        elif pos_raw is None:
            raise ScenarioError(f"tasks[{idx}]: position required for kind {kind!r}")
        else:
            if len(pos_raw) != 3:
                raise ScenarioError(f"tasks[{idx}]: position must be [x, y, z]")
            pos = (float(pos_raw[0]), float(pos_raw[1]), float(pos_raw[2]))
        tasks.append(
            HumanTask(
                kind=kind,
                station=None if t.get("station") is None else str(t["station"]),
                start=float(t["start"]),
                position=pos,
            )
        )
    horizon = float(raw.get("horizon_end", tasks[-1].start if tasks else 0.0))
    return HumanSchedule(name=str(raw.get("name", Path(path).stem)), tasks=tuple(tasks), horizon_end=horizon)


def save_schedule(schedule: HumanSchedule, path: str | Path) -> None:
    rows = []
    for t in schedule.tasks:
        row = {"kind": t.kind, "start": t.start}
        if t.station is not None:
            row["station"] = t.station
        if all(math.isinf(v) for v in t.position):
            row["position"] = UNBOUNDED
        else:
            row["position"] = list(t.position)
        rows.append(row)
    Path(path).write_text(
        yaml.safe_dump(
            {"name": schedule.name, "horizon_end": schedule.horizon_end, "tasks": rows},
            sort_keys=False,
        )
    )


def pose_xyz(pose: PlanarPose, z: float) -> tuple[float, float, float]:
    """Lift a planar pose to the 3D point used for human distances."""
    return (pose.x, pose.y, z)
