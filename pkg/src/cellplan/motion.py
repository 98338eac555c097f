"""Rest-to-rest trapezoidal velocity profiles and base travel times."""

from __future__ import annotations

import math

import numpy as np

from ._kernel import kernel as _default_kernel
from .errors import NegativeDistance, TimeOutOfRange

_TIME_EPS = 1e-12


def tvp_duration(distance: float, v_max: float, a_max: float, kernel=None) -> float:
    """Duration of a rest-to-rest move over the given distance.

    Long moves cruise at v_max (trapezoid); short ones peak below it
    (triangle). The two branches agree at distance = v_max^2 / a_max.
    """
    if v_max <= 0.0 or a_max <= 0.0:
        raise ValueError("v_max and a_max must be positive")
    if distance < 0.0:
        raise NegativeDistance(f"distance {distance} < 0")
    k = kernel or _default_kernel
    return k.tvp_duration(distance, v_max, a_max)


def tvp_sample(distance: float, v_max: float, a_max: float, t: float, kernel=None):
    """(position, velocity) at time t; t must lie within the profile."""
    if v_max <= 0.0 or a_max <= 0.0:
        raise ValueError("v_max and a_max must be positive")
    if distance < 0.0:
        raise NegativeDistance(f"distance {distance} < 0")
    k = kernel or _default_kernel
    total = k.tvp_duration(distance, v_max, a_max)
    if t < -_TIME_EPS or t > total + _TIME_EPS:
        raise TimeOutOfRange(f"t={t} outside [0, {total}]")
    return k.tvp_sample(distance, v_max, a_max, min(max(t, 0.0), total))


def compute_travel_times(candidates, x0, v_b: float, a_b: float, kernel=None) -> np.ndarray:
    """Base travel time from x0 to each candidate pose.

    Axes run synchronized, so a move takes the slowest DOF's profile time.
    Candidates marked infeasible (any +inf coordinate) stay +inf.
    """
    k = kernel or _default_kernel
    cand = np.asarray(candidates, dtype=np.float64)
    if cand.ndim == 1:
        cand = cand[:, None]
    start = np.asarray(x0, dtype=np.float64).reshape(-1)
    if cand.shape[1] != start.shape[0]:
        raise ValueError("candidate DOF count does not match x0")
    out = np.empty(cand.shape[0])
    for i in range(cand.shape[0]):
        if not np.all(np.isfinite(cand[i])):
            out[i] = math.inf
            continue
        t = 0.0
        for d in range(cand.shape[1]):
            td = k.tvp_duration(abs(cand[i, d] - start[d]), v_b, a_b)
            if td > t:
                t = td
        out[i] = t
    return out
