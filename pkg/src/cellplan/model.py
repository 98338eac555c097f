"""Domain types for the packing cell plus scenario file IO and validation.

A scenario file is a YAML tree describing items, boxes, the rail-mounted
robot, the distance-band scaling policy, swarm hyperparameters and
simulator options. Unbounded values (the first distance band, offline
human positions) are written as the string ``unbounded``, never as a raw
float sentinel.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass, field
from pathlib import Path

import yaml

from .errors import ScenarioError, WeightSumWarning
from .geometry import PlanarPose

UNBOUNDED = "unbounded"

_ROW_NAMES = {"x": 0, "y": 1, "z": 2, "roll": 3, "pitch": 4, "yaw": 5}
_ROW_LABELS = {v: k for k, v in _ROW_NAMES.items()}


def _pose(raw, where: str) -> PlanarPose:
    if not isinstance(raw, (list, tuple)) or len(raw) != 3:
        raise ScenarioError(f"{where}: expected [x, y, theta], got {raw!r}")
    return PlanarPose(float(raw[0]), float(raw[1]), float(raw[2])).normalized()


def _triple(raw, where: str) -> tuple[float, float, float]:
    if not isinstance(raw, (list, tuple)) or len(raw) != 3:
        raise ScenarioError(f"{where}: expected three numbers, got {raw!r}")
    return (float(raw[0]), float(raw[1]), float(raw[2]))


@dataclass(frozen=True)
class ItemType:
    """One class of identical items, with its pick-side poses."""

    name: str
    dims: tuple[float, float, float]  # convex-hull l, w, h (m)
    count: int
    pick_poses: tuple[PlanarPose, ...]


@dataclass(frozen=True)
class BoxSpec:
    """A place-side box assigned to one item type; pose is the box corner."""

    item: int
    dims: tuple[float, float, float]
    pose: PlanarPose


@dataclass(frozen=True)
class JointSpec:
    kind: str  # 'revolute' | 'prismatic'
    axis: tuple[float, float, float]
    xyz: tuple[float, float, float]
    rpy: tuple[float, float, float]


@dataclass(frozen=True)
class ArmSpec:
    joints: tuple[JointSpec, ...]
    tool_xyz: tuple[float, float, float]
    tool_rpy: tuple[float, float, float]
    home: tuple[float, ...]
    limits: tuple[tuple[float, float], ...] | None = None


@dataclass(frozen=True)
class BaseSpec:
    """Mobile base: prismatic DOFs sweeping the arm mount from an origin."""

    origin_xyz: tuple[float, float, float]
    origin_rpy: tuple[float, float, float]
    axes: tuple[tuple[float, float, float], ...]
    limits: tuple[tuple[float, float], ...]
    start: tuple[float, ...]
    speed: float
    accel: float
    keepout: tuple[tuple[float, float], ...] = ()
    halfwidth: float = 0.0

    @property
    def dof(self) -> int:
        return len(self.axes)


@dataclass(frozen=True)
class RobotModel:
    arm: ArmSpec
    base: BaseSpec
    tcp_speed: float
    tcp_accel: float
    ik_rows: tuple[int, ...] = (0, 1, 5)
    manip_rows: tuple[int, ...] = (0, 1)

    def reach(self) -> float:
        """Upper bound on TCP distance from the arm mount."""
        r = 0.0
        for i, j in enumerate(self.arm.joints):
            r += math.sqrt(j.xyz[0] ** 2 + j.xyz[1] ** 2 + j.xyz[2] ** 2)
            if j.kind == "prismatic":
                if self.arm.limits is not None:
                    lo, hi = self.arm.limits[i]
                    r += max(abs(lo), abs(hi))
        tx, ty, tz = self.arm.tool_xyz
        return r + math.sqrt(tx * tx + ty * ty + tz * tz)


@dataclass(frozen=True)
class ScalingPolicy:
    """Distance bands mapping human proximity to a discrete scaling level.

    Band v is [d_min[v], d_max[v]); bands are contiguous, strictly
    decreasing, the first is unbounded above and the last reaches zero.
    """

    d_max: tuple[float, ...]
    d_min: tuple[float, ...]

    @property
    def levels(self) -> int:
        return len(self.d_max)

    def band_of(self, distance: float) -> int:
        """Scaling level whose band contains the distance; inf maps to 0."""
        if math.isinf(distance):
            return 0
        for v in range(self.levels):
            if self.d_min[v] <= distance < self.d_max[v]:
                return v
        raise ValueError(f"distance {distance} not covered by any band")


@dataclass(frozen=True)
class PsoParams:
    iterations: int
    particles: int
    pos_limits: tuple[tuple[float, float], ...]
    vel_limits: tuple[tuple[float, float], ...]
    weights: tuple[float, float]  # (time, manipulability)
    inertia_start: float = 0.9
    inertia_end: float = 0.4
    cognitive: float = 2.0
    social: float = 2.0
    seed: int = 0


@dataclass(frozen=True)
class SimOptions:
    sample_dt: float = 0.01
    overfly: float = 0.10
    dwell: float = 0.20
    clearance: float = 0.001


@dataclass(frozen=True)
class Scenario:
    name: str
    table_height: float
    items: tuple[ItemType, ...]
    boxes: tuple[BoxSpec, ...]
    robot: RobotModel
    scaling: ScalingPolicy
    pso: PsoParams
    sim: SimOptions = field(default_factory=SimOptions)

    def boxes_of(self, item: int) -> list[int]:
        return [j for j, b in enumerate(self.boxes) if b.item == item]

    def pick_z(self, item: int) -> float:
        return self.table_height + self.items[item].dims[2]

    def place_z(self, item: int) -> float:
        return self.table_height + self.items[item].dims[2]


@dataclass(frozen=True)
class TypeStats:
    mu_time: float
    sigma_time: float
    mu_delta: float
    sigma_delta: float


@dataclass(frozen=True)
class NormStats:
    """Calibration statistics used to z-score the two KPIs."""

    types: tuple[TypeStats, ...]
    mu_travel: float
    n_tests: int

    def validate(self) -> None:
        if self.mu_travel <= 0.0:
            raise ScenarioError("mu_travel must be positive")
        for i, t in enumerate(self.types):
            if t.sigma_time <= 0.0 or t.sigma_delta <= 0.0:
                raise ScenarioError(f"type {i}: sigmas must be positive")
            if t.mu_time <= 0.0:
                raise ScenarioError(f"type {i}: mu_time must be positive")


@dataclass
class ValidationReport:
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, message: str) -> None:
        self.violations.append(message)


# -- plans -------------------------------------------------------------------


@dataclass(frozen=True)
class PlanTask:
    """One scheduled pick-and-place row of a plan."""

    index: int  # 1-based row counter across the whole plan
    item_type: int
    item: int  # 0-based index within the type
    box: int  # 0-based index within the type's boxes
    spot: int
    base: tuple[float, ...]
    kappa: int
    travel: float
    duration: float
    start: float
    end: float
    pick: PlanarPose
    place: PlanarPose
    speed: float
    accel: float


@dataclass(frozen=True)
class PlanWait:
    """A hold inserted while the human blocks every remaining item."""

    start: float
    end: float


@dataclass
class Plan:
    scenario_name: str
    seed: int
    weights: tuple[float, float]
    base_start: tuple[float, ...]
    tasks: list[PlanTask]
    waits: list[PlanWait]
    best_fitness: float
    sim_calls: int
    meta: dict = field(default_factory=dict)

    @property
    def x_star(self) -> list[tuple[float, ...]]:
        return [t.base for t in self.tasks]

    @property
    def theta_star(self) -> list[int]:
        return [t.item for t in self.tasks]

    @property
    def kappa_star(self) -> list[int]:
        return [t.kappa for t in self.tasks]

    @property
    def total_time(self) -> float:
        ends = [t.end for t in self.tasks] + [w.end for w in self.waits]
        return max(ends) if ends else 0.0


# -- parsing -----------------------------------------------------------------


def _parse_items(raw) -> tuple[ItemType, ...]:
    items = []
    for idx, it in enumerate(raw or []):
        poses = tuple(_pose(p, f"items[{idx}].pick_poses") for p in it.get("pick_poses", []))
        items.append(
            ItemType(
                name=str(it.get("name", f"type{idx}")),
                dims=_triple(it["dims"], f"items[{idx}].dims"),
                count=int(it["count"]),
                pick_poses=poses,
            )
        )
    return tuple(items)


def _parse_joint(raw, where: str) -> JointSpec:
    kind = raw.get("type", "revolute")
    if kind not in ("revolute", "prismatic"):
        raise ScenarioError(f"{where}: unknown joint type {kind!r}")
    ax = _triple(raw.get("axis", [0, 0, 1]), f"{where}.axis")
    norm = math.sqrt(ax[0] ** 2 + ax[1] ** 2 + ax[2] ** 2)
    if norm == 0.0:
        raise ScenarioError(f"{where}: zero joint axis")
    ax = (ax[0] / norm, ax[1] / norm, ax[2] / norm)
    return JointSpec(
        kind=kind,
        axis=ax,
        xyz=_triple(raw.get("xyz", [0, 0, 0]), f"{where}.xyz"),
        rpy=_triple(raw.get("rpy", [0, 0, 0]), f"{where}.rpy"),
    )


def _rows(raw, default: tuple[int, ...]) -> tuple[int, ...]:
    if raw is None:
        return default
    out = []
    for r in raw:
        if isinstance(r, str):
            if r not in _ROW_NAMES:
                raise ScenarioError(f"unknown task row {r!r}")
            out.append(_ROW_NAMES[r])
        else:
            out.append(int(r))
    return tuple(out)


def _limits(raw, where: str) -> tuple[tuple[float, float], ...]:
    out = []
    for i, pair in enumerate(raw):
        if len(pair) != 2:
            raise ScenarioError(f"{where}[{i}]: expected [lo, hi]")
        out.append((float(pair[0]), float(pair[1])))
    return tuple(out)


def _parse_robot(raw) -> RobotModel:
    arm_raw = raw["arm"]
    joints = tuple(
        _parse_joint(j, f"robot.arm.joints[{i}]") for i, j in enumerate(arm_raw.get("joints", []))
    )
    tool = arm_raw.get("tool", {})
    limits = None
    if arm_raw.get("limits") is not None:
        limits = _limits(arm_raw["limits"], "robot.arm.limits")
    arm = ArmSpec(
        joints=joints,
        tool_xyz=_triple(tool.get("xyz", [0, 0, 0]), "robot.arm.tool.xyz"),
        tool_rpy=_triple(tool.get("rpy", [0, 0, 0]), "robot.arm.tool.rpy"),
        home=tuple(float(v) for v in arm_raw.get("home", [0.0] * len(joints))),
        limits=limits,
    )
    base_raw = raw["base"]
    origin = base_raw.get("origin", {})
    axes = tuple(_triple(a, "robot.base.axes") for a in base_raw["axes"])
    base = BaseSpec(
        origin_xyz=_triple(origin.get("xyz", [0, 0, 0]), "robot.base.origin.xyz"),
        origin_rpy=_triple(origin.get("rpy", [0, 0, 0]), "robot.base.origin.rpy"),
        axes=axes,
        limits=_limits(base_raw["limits"], "robot.base.limits"),
        start=tuple(float(v) for v in base_raw.get("start", [0.0] * len(axes))),
        speed=float(base_raw["speed"]),
        accel=float(base_raw["accel"]),
        keepout=_limits(base_raw.get("keepout", []), "robot.base.keepout"),
        halfwidth=float(base_raw.get("halfwidth", 0.0)),
    )
    return RobotModel(
        arm=arm,
        base=base,
        tcp_speed=float(raw["tcp_speed"]),
        tcp_accel=float(raw["tcp_accel"]),
        ik_rows=_rows(raw.get("ik_rows"), (0, 1, 5)),
        manip_rows=_rows(raw.get("manip_rows"), (0, 1)),
    )


def _parse_bound(v, where: str) -> float:
    if isinstance(v, str):
        if v == UNBOUNDED:
            return math.inf
        raise ScenarioError(f"{where}: unknown marker {v!r}")
    out = float(v)
    if math.isinf(out):
        raise ScenarioError(f"{where}: write 'unbounded' instead of a float infinity")
    return out


def _parse_scaling(raw) -> ScalingPolicy:
    d_max = tuple(_parse_bound(v, "scaling.d_max") for v in raw["d_max"])
    d_min = tuple(float(v) for v in raw["d_min"])
    return ScalingPolicy(d_max=d_max, d_min=d_min)


def _parse_pso(raw, base: BaseSpec) -> PsoParams:
    pos = _limits(raw["pos_limits"], "pso.pos_limits") if "pos_limits" in raw else base.limits
    if "vel_limits" in raw:
        vel = _limits(raw["vel_limits"], "pso.vel_limits")
    else:
        vel = tuple((-(hi - lo) / 2.0, (hi - lo) / 2.0) for lo, hi in pos)
    w = raw.get("weights", [0.5, 0.5])
    inertia = raw.get("inertia", [0.9, 0.4])
    return PsoParams(
        iterations=int(raw["iterations"]),
        particles=int(raw["particles"]),
        pos_limits=pos,
        vel_limits=vel,
        weights=(float(w[0]), float(w[1])),
        inertia_start=float(inertia[0]),
        inertia_end=float(inertia[1]),
        cognitive=float(raw.get("cognitive", 2.0)),
        social=float(raw.get("social", 2.0)),
        seed=int(raw.get("seed", 0)),
    )


def scenario_from_dict(raw: dict) -> Scenario:
    try:
        sim_raw = raw.get("sim", {})
        robot = _parse_robot(raw["robot"])
        return Scenario(
            name=str(raw.get("name", "scenario")),
            table_height=float(raw.get("table_height", 0.0)),
            items=_parse_items(raw.get("items")),
            boxes=tuple(
                BoxSpec(
                    item=int(b["item"]),
                    dims=_triple(b["dims"], f"boxes[{j}].dims"),
                    pose=_pose(b["pose"], f"boxes[{j}].pose"),
                )
                for j, b in enumerate(raw.get("boxes", []))
            ),
            robot=robot,
            scaling=_parse_scaling(raw["scaling"]),
            pso=_parse_pso(raw["pso"], robot.base),
            sim=SimOptions(
                sample_dt=float(sim_raw.get("sample_dt", 0.01)),
                overfly=float(sim_raw.get("overfly", 0.10)),
                dwell=float(sim_raw.get("dwell", 0.20)),
                clearance=float(sim_raw.get("clearance", 0.001)),
            ),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ScenarioError(f"bad scenario: {exc}") from exc


def scenario_to_dict(sc: Scenario) -> dict:
    def bound(v: float):
        return UNBOUNDED if math.isinf(v) else v

    robot = sc.robot
    return {
        "name": sc.name,
        "table_height": sc.table_height,
        "items": [
            {
                "name": it.name,
                "dims": list(it.dims),
                "count": it.count,
                "pick_poses": [p.to_list() for p in it.pick_poses],
            }
            for it in sc.items
        ],
        "boxes": [
            {"item": b.item, "dims": list(b.dims), "pose": b.pose.to_list()} for b in sc.boxes
        ],
        "robot": {
            "tcp_speed": robot.tcp_speed,
            "tcp_accel": robot.tcp_accel,
            "ik_rows": [_ROW_LABELS[r] for r in robot.ik_rows],
            "manip_rows": [_ROW_LABELS[r] for r in robot.manip_rows],
            "arm": {
                "joints": [
                    {"type": j.kind, "axis": list(j.axis), "xyz": list(j.xyz), "rpy": list(j.rpy)}
                    for j in robot.arm.joints
                ],
                "tool": {"xyz": list(robot.arm.tool_xyz), "rpy": list(robot.arm.tool_rpy)},
                "home": list(robot.arm.home),
                **({"limits": [list(l) for l in robot.arm.limits]} if robot.arm.limits else {}),
            },
            "base": {
                "origin": {"xyz": list(robot.base.origin_xyz), "rpy": list(robot.base.origin_rpy)},
                "axes": [list(a) for a in robot.base.axes],
                "limits": [list(l) for l in robot.base.limits],
                "start": list(robot.base.start),
                "speed": robot.base.speed,
                "accel": robot.base.accel,
                "keepout": [list(k) for k in robot.base.keepout],
                "halfwidth": robot.base.halfwidth,
            },
        },
        "scaling": {
            "d_max": [bound(v) for v in sc.scaling.d_max],
            "d_min": list(sc.scaling.d_min),
        },
        "pso": {
            "iterations": sc.pso.iterations,
            "particles": sc.pso.particles,
            "pos_limits": [list(l) for l in sc.pso.pos_limits],
            "vel_limits": [list(l) for l in sc.pso.vel_limits],
            "weights": list(sc.pso.weights),
            "inertia": [sc.pso.inertia_start, sc.pso.inertia_end],
            "cognitive": sc.pso.cognitive,
            "social": sc.pso.social,
            "seed": sc.pso.seed,
        },
        "sim": asdict(sc.sim),
    }


def load_scenario(path: str | Path) -> Scenario:
    try:
        raw = yaml.safe_load(Path(path).read_text())
    except (OSError, yaml.YAMLError) as exc:
        raise ScenarioError(f"cannot read scenario {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise ScenarioError(f"scenario {path} is not a mapping")
    return scenario_from_dict(raw)


def save_scenario(sc: Scenario, path: str | Path) -> None:
    Path(path).write_text(yaml.safe_dump(scenario_to_dict(sc), sort_keys=False))


def load_stats(path: str | Path) -> NormStats:
    try:
        raw = yaml.safe_load(Path(path).read_text())
    except (OSError, yaml.YAMLError) as exc:
        raise ScenarioError(f"cannot read stats {path}: {exc}") from exc
    stats = NormStats(
        types=tuple(
            TypeStats(
                mu_time=float(t["mu_time"]),
                sigma_time=float(t["sigma_time"]),
                mu_delta=float(t["mu_delta"]),
                sigma_delta=float(t["sigma_delta"]),
            )
            for t in raw["types"]
        ),
        mu_travel=float(raw["mu_travel"]),
        n_tests=int(raw.get("n_tests", 0)),
    )
    stats.validate()
    return stats


def save_stats(stats: NormStats, path: str | Path) -> None:
    Path(path).write_text(
        yaml.safe_dump(
            {
                "n_tests": stats.n_tests,
                "mu_travel": stats.mu_travel,
                "types": [asdict(t) for t in stats.types],
            },
            sort_keys=False,
        )
    )


def plan_to_dict(p: Plan) -> dict:
    return {
        "scenario": p.scenario_name,
        "seed": p.seed,
        "weights": list(p.weights),
        "base_start": list(p.base_start),
        "best_fitness": None if math.isinf(p.best_fitness) else p.best_fitness,
        "sim_calls": p.sim_calls,
        "total_time": p.total_time,
        "x_star": [list(b) for b in p.x_star],
        "theta_star": p.theta_star,
        "kappa_star": p.kappa_star,
        "tasks": [
            {
                "index": t.index,
                "type": t.item_type,
                "item": t.item,
                "box": t.box,
                "spot": t.spot,
                "base": list(t.base),
                "kappa": t.kappa,
                "travel": t.travel,
                "duration": t.duration,
                "start": t.start,
                "end": t.end,
                "pick": t.pick.to_list(),
                "place": t.place.to_list(),
                "speed": t.speed,
                "accel": t.accel,
            }
            for t in p.tasks
        ],
        "waits": [{"start": w.start, "end": w.end} for w in p.waits],
        "meta": p.meta,
    }


def save_plan(p: Plan, path: str | Path) -> None:
    Path(path).write_text(yaml.safe_dump(plan_to_dict(p), sort_keys=False))


def load_plan(path: str | Path) -> Plan:
    try:
        raw = yaml.safe_load(Path(path).read_text())
    except (OSError, yaml.YAMLError) as exc:
        raise ScenarioError(f"cannot read plan {path}: {exc}") from exc
    tasks = [
        PlanTask(
            index=int(t["index"]),
            item_type=int(t["type"]),
            item=int(t["item"]),
            box=int(t["box"]),
            spot=int(t["spot"]),
            base=tuple(float(v) for v in t["base"]),
            kappa=int(t["kappa"]),
            travel=float(t["travel"]),
            duration=float(t["duration"]),
            start=float(t["start"]),
            end=float(t["end"]),
            pick=_pose(t["pick"], "plan.pick"),
            place=_pose(t["place"], "plan.place"),
            speed=float(t["speed"]),
            accel=float(t["accel"]),
        )
        for t in raw.get("tasks", [])
    ]
    waits = [PlanWait(start=float(w["start"]), end=float(w["end"])) for w in raw.get("waits", [])]
    best = raw.get("best_fitness")
    return Plan(
        scenario_name=str(raw.get("scenario", "")),
        seed=int(raw.get("seed", 0)),
        weights=tuple(raw.get("weights", (0.5, 0.5))),
        base_start=tuple(raw.get("base_start", ())),
        tasks=tasks,
        waits=waits,
        best_fitness=math.inf if best is None else float(best),
        sim_calls=int(raw.get("sim_calls", 0)),
        meta=raw.get("meta", {}),
    )


# -- validation ----------------------------------------------------------------


def _sweep_distance_xy(base: BaseSpec, point: tuple[float, float]) -> float:
    """Horizontal distance from a point to the mount sweep of the first axis."""
    ox, oy, _ = base.origin_xyz
    ax, ay, _ = base.axes[0]
    lo, hi = base.limits[0]
    px, py = point[0] - ox, point[1] - oy
    denom = ax * ax + ay * ay
    if denom == 0.0:  # axis is vertical; mount is a point in xy
        u = 0.0
    else:
        u = max(lo, min(hi, (px * ax + py * ay) / denom))
    dx, dy = px - u * ax, py - u * ay
    return math.hypot(dx, dy)


def validate_scenario(sc: Scenario) -> ValidationReport:
    """Check every declared invariant; returns a report, never raises."""
    rep = ValidationReport()
    for i, it in enumerate(sc.items):
        if it.count <= 0:
            rep.add(f"items[{i}]: empty item type (count={it.count})")
        if any(d <= 0 for d in it.dims):
            rep.add(f"items[{i}]: dims must be strictly positive")
        if len(it.pick_poses) != it.count:
            rep.add(f"items[{i}]: {len(it.pick_poses)} pick poses for count {it.count}")
        for k, p in enumerate(it.pick_poses):
            if not (math.isfinite(p.x) and math.isfinite(p.y) and math.isfinite(p.theta)):
                rep.add(f"items[{i}].pick_poses[{k}]: non-finite pose")
    for j, b in enumerate(sc.boxes):
        if b.item < 0 or b.item >= len(sc.items):
            rep.add(f"boxes[{j}]: unknown item type {b.item}")
            continue
        if any(d <= 0 for d in b.dims):
            rep.add(f"boxes[{j}]: dims must be strictly positive")
        if b.dims[2] < sc.items[b.item].dims[2]:
            rep.add(f"boxes[{j}]: box shorter than its item type (layout would be empty)")
    for i in range(len(sc.items)):
        if not sc.boxes_of(i):
            rep.add(f"items[{i}]: no box assigned to this type")

    pol = sc.scaling
    if pol.levels < 2:
        rep.add("scaling: need at least two levels")
    else:
        if pol.d_min[-1] != 0.0:
            rep.add("scaling: last band must reach 0")
        if not math.isinf(pol.d_max[0]):
            rep.add("scaling: first band must be unbounded above")
        for v in range(pol.levels - 1):
            if pol.d_min[v] != pol.d_max[v + 1]:
                rep.add(f"scaling: bands {v} and {v + 1} are not contiguous")
        if any(pol.d_max[v + 1] >= pol.d_max[v] for v in range(pol.levels - 1)):
            rep.add("scaling: d_max must be strictly decreasing")
        if any(pol.d_min[v + 1] >= pol.d_min[v] for v in range(pol.levels - 1)):
            rep.add("scaling: d_min must be strictly decreasing")

    robot = sc.robot
    if not robot.arm.joints:
        rep.add("robot.arm: chain is empty")
    if len(robot.arm.home) != len(robot.arm.joints):
        rep.add("robot.arm: home length does not match chain")
    for name, v in (
        ("tcp_speed", robot.tcp_speed),
        ("tcp_accel", robot.tcp_accel),
        ("base.speed", robot.base.speed),
        ("base.accel", robot.base.accel),
    ):
        if v <= 0:
            rep.add(f"robot.{name}: must be positive")
    for d, (lo, hi) in enumerate(robot.base.limits):
        if lo >= hi:
            rep.add(f"robot.base.limits[{d}]: min must be below max")
    if len(robot.base.axes) != len(robot.base.limits) or len(robot.base.axes) != len(
        robot.base.start
    ):
        rep.add("robot.base: axes, limits and start must have equal length")

    pso = sc.pso
    if pso.iterations < 1 or pso.particles < 1:
        rep.add("pso: iterations and particles must be at least 1")
    if abs(pso.weights[0] + pso.weights[1] - 1.0) > 1e-9:
        warnings.warn(
            f"KPI weights sum to {pso.weights[0] + pso.weights[1]}, not 1", WeightSumWarning
        )
    for d, (lo, hi) in enumerate(pso.vel_limits):
        if abs(lo + hi) > 1e-12:
            rep.add(f"pso.vel_limits[{d}]: must be symmetric around 0")
    if len(pso.pos_limits) != robot.base.dof:
        rep.add("pso.pos_limits: one pair per base DOF required")

    reach = robot.reach()
    if rep.ok:
        for i, it in enumerate(sc.items):
            for k, p in enumerate(it.pick_poses):
                if _sweep_distance_xy(robot.base, p.xy) > reach:
                    rep.add(f"items[{i}].pick_poses[{k}]: outside the reachable rail sweep")
    return rep
