"""Kinematic digital model of the cell: executes pick-and-place rollouts.

A rollout concatenates straight TCP segments (approach, descend, lift,
transfer, descend, lift) with suction dwells, timed by trapezoidal
profiles at the scaled TCP limits. The arm tracks each segment through
warm-started IK with the rail frozen, sampling inverse manipulability at
a fixed period. The vertical axis is treated as a kinematically trivial
plunge: segment lengths include z, arm IK tracks the horizontal rows.

Failures never raise: unreachable poses set the infeasibility penalty,
wall or keep-out crossings the collision penalty, and the optimizer
always receives a result it can rank.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._kernel import kernel as _default_kernel
from .errors import BadKappa
from .geometry import PlanarPose, transform, yaw_of
from .humans import scale_params
from .kinematics import Chain
from .model import Scenario

_EPS = 1e-9


@dataclass(frozen=True)
class SimResult:
    """KPIs of one rollout; penalties are 0 or +inf, never in between."""

    t_pp: float
    delta_bar: float
    xi_c: float
    xi_f: float
    trace: tuple | None = None

    @property
    def feasible(self) -> bool:
        return self.xi_c == 0.0 and self.xi_f == 0.0


def _box_frame_segment(box, box_z0, p0, p1):
    """Segment endpoints expressed in the box corner frame."""
    c, s = math.cos(box.pose.theta), math.sin(box.pose.theta)
    out = []
    for p in (p0, p1):
        dx, dy = p[0] - box.pose.x, p[1] - box.pose.y
        out.append((c * dx + s * dy, -s * dx + c * dy, p[2] - box_z0))
    return out


def _crosses_wall(box, box_z0, p0, p1) -> bool:
    """True when the segment pierces the box anywhere but its top opening."""
    (x0, y0, z0), (x1, y1, z1) = _box_frame_segment(box, box_z0, p0, p1)
    lo = (0.0, 0.0, 0.0)
    hi = (box.dims[0], box.dims[1], box.dims[2])
    p = (x0, y0, z0)
    d = (x1 - x0, y1 - y0, z1 - z0)
    t_in, t_out = 0.0, 1.0
    face_in = face_out = -1  # axis*2 + (0 lower | 1 upper)
    for ax in range(3):
        if abs(d[ax]) < _EPS:
            if p[ax] < lo[ax] - _EPS or p[ax] > hi[ax] + _EPS:
                return False
            continue
        t_lo = (lo[ax] - p[ax]) / d[ax]
        t_hi = (hi[ax] - p[ax]) / d[ax]
        f_lo, f_hi = ax * 2, ax * 2 + 1
        if t_lo > t_hi:
            t_lo, t_hi = t_hi, t_lo
            f_lo, f_hi = f_hi, f_lo
        if t_lo > t_in:
            t_in, face_in = t_lo, f_lo
        if t_hi < t_out:
            t_out, face_out = t_hi, f_hi
    if t_in >= t_out - _EPS:
        return False  # misses the box (or touches a corner/edge)
    top = 2 * 2 + 1
    if face_in >= 0 and face_in != top:
        return True
    if face_out >= 0 and face_out != top:
        return True
    return False


class DigitalModel:
    """Rollout evaluator bound to one scenario; counts every simulation."""

    def __init__(self, scenario: Scenario, kernel=None, jobs: int = 1):
        self.scenario = scenario
        self.kernel = kernel or _default_kernel
        self.jobs = max(1, jobs)
        self.chain = Chain.from_spec(scenario.robot.arm)
        self.ik_rows = np.asarray(scenario.robot.ik_rows, dtype=np.int32)
        self.manip_rows = np.asarray(scenario.robot.manip_rows, dtype=np.int32)
        self.calls = 0

    def reset_calls(self) -> None:
        self.calls = 0

    def mount(self, base_pose) -> np.ndarray:
        """World transform of the arm mount for a base DOF vector."""
        base = self.scenario.robot.base
        u = np.asarray(base_pose, dtype=np.float64).reshape(-1)
        if u.shape[0] != base.dof:
            raise ValueError(f"base pose needs {base.dof} DOFs")
        shift = np.zeros(3)
        for d in range(base.dof):
            shift += u[d] * np.asarray(base.axes[d])
        return np.ascontiguousarray(
            transform(base.origin_xyz, base.origin_rpy) @ transform(shift)
        )

    def _base_in_keepout(self, base_pose) -> bool:
        base = self.scenario.robot.base
        u0 = float(np.asarray(base_pose).reshape(-1)[0])
        lo, hi = u0 - base.halfwidth, u0 + base.halfwidth
        return any(lo <= k_hi and hi >= k_lo for k_lo, k_hi in base.keepout)

    def _segments(self, mount_T, pick: PlanarPose, place: PlanarPose, item: int):
        sc = self.scenario
        pick_z = sc.pick_z(item)
        place_z = sc.place_z(item)
        fly = sc.sim.overfly
        home_T = np.asarray(
            self.kernel.fk(
                self.chain.jtypes,
                self.chain.axes,
                self.chain.origins,
                self.chain.tool,
                mount_T,
                self.chain.home,
            )
        )
        start = (home_T[0, 3], home_T[1, 3], pick_z + fly, yaw_of(home_T))
        over_pick = (pick.x, pick.y, pick_z + fly, pick.theta)
        at_pick = (pick.x, pick.y, pick_z, pick.theta)
        over_place = (place.x, place.y, place_z + fly, place.theta)
        at_place = (place.x, place.y, place_z, place.theta)
        return [
            (start, over_pick),
            (over_pick, at_pick),
            None,  # suction on
            (at_pick, over_pick),
            (over_pick, over_place),
            (over_place, at_place),
            None,  # suction off
            (at_place, over_place),
        ]

    def _collides(self, segments, base_pose) -> bool:
        if self._base_in_keepout(base_pose):
            return True
        z0 = self.scenario.table_height
        for seg in segments:
            if seg is None:
                continue
            for box in self.scenario.boxes:
                if _crosses_wall(box, z0, seg[0], seg[1]):
                    return True
        return False

    def simulate_pnp(
        self,
        base_pose,
        pick: PlanarPose,
        place: PlanarPose,
        kappa: int,
        item: int,
        record_trace: bool = False,
    ) -> SimResult:
        """One full rollout; returns KPIs, never raises on infeasibility."""
        self.calls += 1
        return self._rollout(base_pose, pick, place, kappa, item, record_trace)

    def _rollout(self, base_pose, pick, place, kappa, item, record_trace=False) -> SimResult:
        sc = self.scenario
        n_k = sc.scaling.levels
        if not 0 <= kappa < n_k - 1:
            raise BadKappa(f"kappa {kappa} not simulable (levels={n_k})")
        v, a = scale_params(sc.robot.tcp_speed, sc.robot.tcp_accel, kappa, n_k)
        mount_T = self.mount(base_pose)
        segments = self._segments(mount_T, pick, place, item)

        if self._collides(segments, base_pose):
            return SimResult(math.nan, math.inf, math.inf, 0.0)

        # Reach fast-fail on the horizontal rows before sampling anything.
        reach = self.chain.reach
        for seg in segments:
            if seg is None:
                continue
            for p in seg:
                dx, dy = p[0] - mount_T[0, 3], p[1] - mount_T[1, 3]
                if math.sqrt(dx * dx + dy * dy) > reach:
                    return SimResult(math.nan, math.inf, 0.0, math.inf)

        q = self.chain.home
        t_pp = 0.0
        msum = 0.0
        count = 0
        trace: list | None = [] if record_trace else None
        for seg in segments:
            if seg is None:
                t_pp += sc.sim.dwell
                continue
            seg_trace: list | None = [] if record_trace else None
            duration, seg_sum, seg_count, q, ok = self.kernel.segment_metrics(
                self.chain.jtypes,
                self.chain.axes,
                self.chain.origins,
                self.chain.tool,
                mount_T,
                np.asarray(q, dtype=np.float64),
                np.asarray(seg[0], dtype=np.float64),
                np.asarray(seg[1], dtype=np.float64),
                v,
                a,
                sc.sim.sample_dt,
                self.ik_rows,
                self.manip_rows,
                self.chain.qmin,
                self.chain.qmax,
                1e-6,
                200,
                1e-3,
                seg_trace,
            )
            if not ok:
                return SimResult(math.nan, math.inf, 0.0, math.inf)
            if record_trace:
                trace.extend((t_pp + s[0], s[1], s[2], s[3], s[4]) for s in seg_trace)
            t_pp += duration
            msum += seg_sum
            count += seg_count
        delta_bar = msum / count if count > 0 else math.inf
        return SimResult(t_pp, delta_bar, 0.0, 0.0, tuple(trace) if record_trace else None)

    def batch_simulate(self, particles, pick, place, kappa: int, item: int) -> list[SimResult]:
        """Element-wise simulate over candidate base poses, order preserved."""
        rows = [np.asarray(p, dtype=np.float64).reshape(-1) for p in particles]
        self.calls += len(rows)
        if self.jobs == 1 or len(rows) == 1:
            return [self._rollout(r, pick, place, kappa, item) for r in rows]
        with ThreadPoolExecutor(max_workers=self.jobs) as pool:
            return list(pool.map(lambda r: self._rollout(r, pick, place, kappa, item), rows))


def simulate_pnp(scenario, base_pose, pick, place, kappa, item=0, record_trace=False) -> SimResult:
    """Convenience wrapper building a throwaway model."""
    return DigitalModel(scenario).simulate_pnp(base_pose, pick, place, kappa, item, record_trace)


def batch_simulate(scenario, particles, pick, place, kappa, item=0) -> list[SimResult]:
    return DigitalModel(scenario).batch_simulate(particles, pick, place, kappa, item)
