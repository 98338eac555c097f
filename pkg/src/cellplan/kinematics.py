"""Serial-chain kinematics: FK, geometric Jacobian, DLS inverse kinematics
and the inverse manipulability index.

The heavy lifting happens in the selected kernel backend; this module owns
the array packing, workspace checks and error mapping. Task rows index the
6-row geometric Jacobian (0..2 linear xyz, 5 yaw); orientation IK beyond
yaw is not supported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._kernel import kernel as _default_kernel
from .errors import DimensionMismatch, IkDidNotConverge, OutOfReach
from .geometry import transform
from .model import ArmSpec

DEFAULT_TOL = 1e-6
DEFAULT_MAX_ITERS = 200
DEFAULT_DAMPING = 1e-3

_IDENTITY = np.eye(4)


@dataclass(frozen=True)
class Chain:
    """Kernel-ready arrays describing one serial arm."""

    jtypes: np.ndarray  # (n,) int32, 0 revolute / 1 prismatic
    axes: np.ndarray  # (n, 3)
    origins: np.ndarray  # (n, 4, 4) fixed transform ahead of each joint
    tool: np.ndarray  # (4, 4)
    qmin: np.ndarray
    qmax: np.ndarray
    home: np.ndarray
    reach: float

    @property
    def n_joints(self) -> int:
        return len(self.jtypes)

    @classmethod
    def from_spec(cls, arm: ArmSpec) -> "Chain":
        n = len(arm.joints)
        jtypes = np.array([0 if j.kind == "revolute" else 1 for j in arm.joints], dtype=np.int32)
        axes = np.array([j.axis for j in arm.joints], dtype=np.float64)
        origins = np.stack([transform(j.xyz, j.rpy) for j in arm.joints]).astype(np.float64)
        tool = transform(arm.tool_xyz, arm.tool_rpy)
        if arm.limits is None:
            qmin = np.full(n, -np.inf)
            qmax = np.full(n, np.inf)
        else:
            qmin = np.array([lo for lo, _ in arm.limits], dtype=np.float64)
            qmax = np.array([hi for _, hi in arm.limits], dtype=np.float64)
        reach = 0.0
        for i, j in enumerate(arm.joints):
            reach += math.sqrt(j.xyz[0] ** 2 + j.xyz[1] ** 2 + j.xyz[2] ** 2)
            if j.kind == "prismatic" and arm.limits is not None:
                reach += max(abs(qmin[i]), abs(qmax[i]))
        reach += math.sqrt(sum(v * v for v in arm.tool_xyz))
        return cls(
            jtypes=jtypes,
            axes=np.ascontiguousarray(axes),
            origins=np.ascontiguousarray(origins),
            tool=np.ascontiguousarray(tool),
            qmin=qmin,
            qmax=qmax,
            home=np.array(arm.home, dtype=np.float64),
            reach=reach,
        )


def _check_q(chain: Chain, q) -> np.ndarray:
    q = np.asarray(q, dtype=np.float64)
    if q.shape != (chain.n_joints,):
        raise DimensionMismatch(f"expected {chain.n_joints} joint values, got shape {q.shape}")
    return np.ascontiguousarray(q)


def forward_kinematics(chain: Chain, q, base=None, kernel=None) -> np.ndarray:
    """TCP pose as a 4x4 homogeneous transform."""
    k = kernel or _default_kernel
    base = _IDENTITY if base is None else np.ascontiguousarray(base, dtype=np.float64)
    return np.array(
        k.fk(chain.jtypes, chain.axes, chain.origins, chain.tool, base, _check_q(chain, q))
    )


def jacobian(chain: Chain, q, base=None, kernel=None) -> np.ndarray:
    """Geometric Jacobian, 6 x n (linear xyz rows then angular xyz rows)."""
    k = kernel or _default_kernel
    base = _IDENTITY if base is None else np.ascontiguousarray(base, dtype=np.float64)
    return np.array(
        k.jacobian(chain.jtypes, chain.axes, chain.origins, chain.tool, base, _check_q(chain, q))
    )


def _target_vec(target) -> np.ndarray:
    t = np.asarray(target, dtype=np.float64)
    if t.shape == (4, 4):  # accept a transform; yaw from its x axis heading
        t = np.array([t[0, 3], t[1, 3], t[2, 3], math.atan2(t[1, 0], t[0, 0])])
    if t.shape != (4,):
        raise ValueError("target must be (x, y, z, yaw) or a 4x4 transform")
    return np.ascontiguousarray(t)


def check_reach(chain: Chain, target, rows, base=None) -> None:
    """Fast-fail when the target position cannot possibly be reached."""
    base = _IDENTITY if base is None else np.asarray(base)
    t = _target_vec(target)
    d2 = 0.0
    for r in rows:
        if r < 3:
            d2 += (t[r] - base[r, 3]) ** 2
    if math.sqrt(d2) > chain.reach:
        raise OutOfReach(f"target {t[:3].tolist()} beyond workspace radius {chain.reach:.3f} m")


def inverse_kinematics(
    chain: Chain,
    target,
    q0,
    tol: float = DEFAULT_TOL,
    max_iters: int = DEFAULT_MAX_ITERS,
    damping: float = DEFAULT_DAMPING,
    rows=(0, 1, 5),
    base=None,
    kernel=None,
) -> np.ndarray:
    """Damped least-squares IK from q0; joint limits enforced by clamping.

    Raises OutOfReach for targets beyond the workspace radius and
    IkDidNotConverge when the iteration budget runs out.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    k = kernel or _default_kernel
    basem = _IDENTITY if base is None else np.ascontiguousarray(base, dtype=np.float64)
    t = _target_vec(target)
    check_reach(chain, t, rows, basem)
    q, err, _, converged = k.ik_solve(
        chain.jtypes,
        chain.axes,
        chain.origins,
        chain.tool,
        basem,
        _check_q(chain, q0),
        t,
        np.asarray(rows, dtype=np.int32),
        chain.qmin,
        chain.qmax,
        tol,
        max_iters,
        damping,
    )
    if not converged:
        raise IkDidNotConverge(f"pose error {err:.2e} after {max_iters} iterations")
    return np.array(q)


def inverse_manipulability(chain: Chain, q, rows=(0, 1), base=None, kernel=None) -> float:
    """1/sqrt(det(J_sel J_sel^T)); inf at (near-)singular configurations."""
    k = kernel or _default_kernel
    base = _IDENTITY if base is None else np.ascontiguousarray(base, dtype=np.float64)
    return k.inverse_manip(
        chain.jtypes,
        chain.axes,
        chain.origins,
        chain.tool,
        base,
        _check_q(chain, q),
        np.asarray(rows, dtype=np.int32),
    )
