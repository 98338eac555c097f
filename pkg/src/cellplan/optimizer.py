"""Particle-swarm search over base poses, plus the randomized baseline and
the calibration run that produces normalization statistics.

One swarm run optimizes the base pose for a single (pick item, place spot)
pair. Fitness is the weighted sum of z-scored cycle time and z-scored mean
inverse manipulability, plus infinite penalties for infeasible or
colliding rollouts. All randomness comes from counter-based streams, so
results are independent of evaluation order and worker count.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import randstream as rs
from .errors import AllInfeasible, DegenerateVarianceWarning, TooFewSuccesses
from .humans import HumanSchedule, pose_xyz, receding_horizon_scale
from .model import NormStats, PsoParams, TypeStats
from .motion import compute_travel_times
from .packing import PlacementLayout, layout_for
from .simulator import DigitalModel

SIGMA_FLOOR = 1e-6


def normalize(t_row, delta_row, stats: NormStats, item_type: int):
    """Z-score both KPI rows with the item type's statistics; +inf stays."""
    ts = stats.types[item_type]
    z_t = (np.asarray(t_row, dtype=np.float64) - ts.mu_time) / ts.sigma_time
    z_d = (np.asarray(delta_row, dtype=np.float64) - ts.mu_delta) / ts.sigma_delta
    return z_t, z_d


def fitness(z_t, z_d, weights, xi_f, xi_c) -> np.ndarray:
    """Weighted KPI sum; any penalty dominates. Zero-weight KPIs are
    skipped entirely so their markers cannot leak into the sum."""
    z_t = np.asarray(z_t, dtype=np.float64)
    psi = np.zeros(z_t.shape)
    w_t, w_d = weights
    if w_t != 0.0:
        psi = psi + w_t * z_t
    if w_d != 0.0:
        psi = psi + w_d * np.asarray(z_d, dtype=np.float64)
    penalty = np.asarray(xi_f) + np.asarray(xi_c)
    return np.where(penalty > 0.0, math.inf, psi)


def inertia(p: int, n_s: int, omega_0: float, omega_n: float) -> float:
    """Linearly decreasing inertia over the iteration budget."""
    return omega_0 + p * (omega_n - omega_0) / n_s


@dataclass
class SwarmState:
    pos: np.ndarray  # (N_p, N_D)
    vel: np.ndarray
    pbest_pos: np.ndarray
    pbest_fit: np.ndarray
    gbest_pos: np.ndarray
    gbest_fit: float = math.inf
    gbest_tpp: float = math.nan
    iteration: int = 0

    @classmethod
    def initial(cls, pos: np.ndarray, vel: np.ndarray) -> "SwarmState":
        return cls(
            pos=pos,
            vel=vel,
            pbest_pos=pos.copy(),
            pbest_fit=np.full(pos.shape[0], math.inf),
            gbest_pos=np.zeros(pos.shape[1]),
        )


def update_swarm(state: SwarmState, psi, t_pp, params: PsoParams, r1, r2, p: int) -> SwarmState:
    """Personal/global best bookkeeping followed by the velocity and
    position update; positions are clipped to the search bounds."""
    psi = np.asarray(psi, dtype=np.float64)
    improved = psi < state.pbest_fit
    state.pbest_pos[improved] = state.pos[improved]
    state.pbest_fit[improved] = psi[improved]
    best = float(np.min(psi))
    if best < state.gbest_fit:
        h = int(np.argmin(psi))
        state.gbest_pos = state.pos[h].copy()
        state.gbest_fit = best
        state.gbest_tpp = float(np.asarray(t_pp)[h])
    omega = inertia(p, params.iterations, params.inertia_start, params.inertia_end)
    r1 = np.asarray(r1, dtype=np.float64).reshape(-1, 1)
    r2 = np.asarray(r2, dtype=np.float64).reshape(-1, 1)
    state.vel = (
        omega * state.vel
        + params.cognitive * r1 * (state.pbest_pos - state.pos)
        + params.social * r2 * (state.gbest_pos - state.pos)
    )
    state.pos = state.pos + state.vel
    lo = np.array([l for l, _ in params.pos_limits])
    hi = np.array([h for _, h in params.pos_limits])
    state.pos = np.clip(state.pos, lo, hi)
    state.iteration = p
    return state


BLOCKED = "blocked-by-human"
NO_ROLLOUT = "no-feasible-rollout"


@dataclass
class PsoRunResult:
    """Per-candidate outputs of one swarm run; +inf rows mark items that
    were excluded or never produced a feasible rollout."""

    x_bar: np.ndarray  # (count, N_D)
    t_pp: np.ndarray  # (count,)
    kappas: np.ndarray  # (count,) int, -1 for items not evaluated
    best_fit: np.ndarray  # (count,)
    failures: dict[int, str] = field(default_factory=dict)


def run_pso(
    model: DigitalModel,
    item_type: int,
    place,
    packed: set[int],
    t_c: float,
    t_w: float,
    stats: NormStats,
    schedule: HumanSchedule,
    params: PsoParams,
    run_index: int = 0,
    strategy: str = "pso",
) -> PsoRunResult:
    """Optimize a base pose for every not-yet-packed item of one type
    against one place spot; the scaling level is fixed per item before
    its swarm run and held for the whole run."""
    if strategy not in ("pso", "random"):
        raise ValueError(f"unknown strategy {strategy!r}")
    sc = model.scenario
    item = sc.items[item_type]
    n_d = sc.robot.base.dof
    n_k = sc.scaling.levels
    count = item.count
    lo = np.array([l for l, _ in params.pos_limits])
    hi = np.array([h for _, h in params.pos_limits])
    vlo = np.array([l for l, _ in params.vel_limits])
    vhi = np.array([h for _, h in params.vel_limits])

    result = PsoRunResult(
        x_bar=np.full((count, n_d), math.inf),
        t_pp=np.full(count, math.inf),
        kappas=np.full(count, -1, dtype=np.int64),
        best_fit=np.full(count, math.inf),
    )
    candidates = [s for s in range(count) if s not in packed]
    place_pt = pose_xyz(place, sc.place_z(item_type))
    for s in candidates:
        pick = item.pick_poses[s]
        kappa = receding_horizon_scale(
            schedule, t_c, t_w, pose_xyz(pick, sc.pick_z(item_type)), place_pt, sc.scaling
        )
        result.kappas[s] = kappa
        if kappa == n_k - 1:  # full stop: the planner must wait, not simulate
            result.failures[s] = BLOCKED
            continue
        pos = rs.uniform(params.seed, rs.INIT_POS, (run_index, s), lo, hi, (params.particles, n_d))
        vel = rs.uniform(params.seed, rs.INIT_VEL, (run_index, s), vlo, vhi, (params.particles, n_d))
        state = SwarmState.initial(pos, vel)
        prev_best = state.gbest_fit
        for p in range(1, params.iterations + 1):
            sims = model.batch_simulate(state.pos, pick, place, kappa, item_type)
            t_row = np.array([r.t_pp for r in sims])
            d_row = np.array([r.delta_bar for r in sims])
            xi_f = np.array([r.xi_f for r in sims])
            xi_c = np.array([r.xi_c for r in sims])
            z_t, z_d = normalize(t_row, d_row, stats, item_type)
            psi = fitness(z_t, z_d, params.weights, xi_f, xi_c)
            if strategy == "pso":
                r1 = rs.uniform(params.seed, rs.R_COGNITIVE, (run_index, s, p), 0.0, 1.0, params.particles)
                r2 = rs.uniform(params.seed, rs.R_SOCIAL, (run_index, s, p), 0.0, 1.0, params.particles)
                update_swarm(state, psi, t_row, params, r1, r2, p)
            else:
                _track_bests(state, psi, t_row)
                state.pos = rs.uniform(
                    params.seed, rs.RESAMPLE, (run_index, s, p), lo, hi, (params.particles, n_d)
                )
                state.iteration = p
            assert state.gbest_fit <= prev_best  # global best never regresses
            prev_best = state.gbest_fit
        if math.isinf(state.gbest_fit):
            result.failures[s] = NO_ROLLOUT
            continue
        result.x_bar[s] = state.gbest_pos
        result.t_pp[s] = state.gbest_tpp
        result.best_fit[s] = state.gbest_fit
    evaluated = [s for s in candidates if result.failures.get(s) != BLOCKED]
    if evaluated and all(result.failures.get(s) == NO_ROLLOUT for s in evaluated):
        raise AllInfeasible(evaluated[0], NO_ROLLOUT)
    return result


def _track_bests(state: SwarmState, psi, t_pp) -> None:
    psi = np.asarray(psi, dtype=np.float64)
    improved = psi < state.pbest_fit
    state.pbest_pos[improved] = state.pos[improved]
    state.pbest_fit[improved] = psi[improved]
    best = float(np.min(psi))
    if best < state.gbest_fit:
        h = int(np.argmin(psi))
        state.gbest_pos = state.pos[h].copy()
        state.gbest_fit = best
        state.gbest_tpp = float(np.asarray(t_pp)[h])


def random_baseline(*args, **kwargs) -> PsoRunResult:
    """Blind search at the exact simulation budget of the swarm run:
    positions are resampled uniformly every iteration, best-so-far
    tracking is unchanged."""
    kwargs["strategy"] = "random"
    return run_pso(*args, **kwargs)


def select_travel(model: DigitalModel, result: PsoRunResult, x0) -> np.ndarray:
    """Travel times from the current base pose to each candidate's best."""
    base = model.scenario.robot.base
    return compute_travel_times(result.x_bar, x0, base.speed, base.accel, kernel=model.kernel)


# -- calibration ---------------------------------------------------------------


def mean_travel_time(limits, v_b: float, a_b: float, n: int, seed: int, kernel=None) -> float:
    """Monte-Carlo mean base travel time between uniform start/goal pairs."""
    lo = np.array([l for l, _ in limits])
    hi = np.array([h for _, h in limits])
    total = 0.0
    for k in range(n):
        g = rs.stream(seed, rs.TRAVEL_MEAN, k)
        start = g.uniform(lo, hi, len(limits))
        goal = g.uniform(lo, hi, len(limits))
        total += float(compute_travel_times([goal], start, v_b, a_b, kernel=kernel)[0])
    return total / n


def calibrate(
    model: DigitalModel,
    n_tests: int,
    seed: int,
    layout: PlacementLayout | None = None,
    min_successes: int = 30,
) -> tuple[NormStats, list[int]]:
    """Random unscaled rollouts per item type; feasible ones feed the KPI
    statistics. Returns the stats and the per-type success counts."""
    if n_tests < min_successes:
        raise ValueError(f"n_tests must be at least {min_successes}")
    sc = model.scenario
    if layout is None:
        layout = layout_for(sc)
    base = sc.robot.base
    lo = np.array([l for l, _ in base.limits])
    hi = np.array([h for _, h in base.limits])
    per_type = []
    successes = []
    for i, item in enumerate(sc.items):
        spots = [p for box_spots in layout.spots[i] for p in box_spots]
        times = []
        deltas = []
        for k in range(n_tests):
            g = rs.stream(seed, rs.CALIBRATION, i, k)
            s = int(g.integers(0, item.count))
            spot = spots[int(g.integers(0, len(spots)))]
            pose = g.uniform(lo, hi, base.dof)
            r = model.simulate_pnp(pose, item.pick_poses[s], spot, 0, i)
            if r.feasible and math.isfinite(r.delta_bar):
                times.append(r.t_pp)
                deltas.append(r.delta_bar)
        if len(times) < min_successes:
            raise TooFewSuccesses(
                f"type {i}: only {len(times)}/{n_tests} feasible rollouts"
            )
        successes.append(len(times))
        sigma_t = float(np.std(times, ddof=1))
        sigma_d = float(np.std(deltas, ddof=1))
        if sigma_t < SIGMA_FLOOR or sigma_d < SIGMA_FLOOR:
            warnings.warn(f"type {i}: KPI variance degenerate", DegenerateVarianceWarning)
            sigma_t = max(sigma_t, SIGMA_FLOOR)
            sigma_d = max(sigma_d, SIGMA_FLOOR)
        per_type.append(
            TypeStats(
                mu_time=float(np.mean(times)),
                sigma_time=sigma_t,
                mu_delta=float(np.mean(deltas)),
                sigma_delta=sigma_d,
            )
        )
    mu_travel = mean_travel_time(base.limits, base.speed, base.accel, n_tests, seed, model.kernel)
    stats = NormStats(types=tuple(per_type), mu_travel=mu_travel, n_tests=n_tests)
    stats.validate()
    return stats, successes
