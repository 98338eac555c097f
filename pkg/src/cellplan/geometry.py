"""Planar poses and small homogeneous-transform helpers.

World poses on the table plane are (x, y, theta) with z implied by the
table and box heights; angles are radians, normalized to (-pi, pi].
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


def wrap_angle(angle: float) -> float:
    """Normalize an angle to (-pi, pi]."""
    r = math.fmod(math.pi - angle, 2.0 * math.pi)
    if r < 0.0:
        r += 2.0 * math.pi
    return math.pi - r


@dataclass(frozen=True)
class PlanarPose:
    """Pose of an object on the table plane."""

    x: float
    y: float
    theta: float

    def normalized(self) -> "PlanarPose":
        return PlanarPose(self.x, self.y, wrap_angle(self.theta))

    @property
    def xy(self) -> tuple[float, float]:
        return (self.x, self.y)

    def to_list(self) -> list[float]:
        return [self.x, self.y, self.theta]


def rotation_rpy(roll: float, pitch: float, yaw: float) -> np.ndarray:
    """Rotation matrix for fixed-axis roll/pitch/yaw (Rz @ Ry @ Rx)."""
    cr, sr = math.cos(roll), math.sin(roll)
    cp, sp = math.cos(pitch), math.sin(pitch)
    cy, sy = math.cos(yaw), math.sin(yaw)
    rz = np.array([[cy, -sy, 0.0], [sy, cy, 0.0], [0.0, 0.0, 1.0]])
    ry = np.array([[cp, 0.0, sp], [0.0, 1.0, 0.0], [-sp, 0.0, cp]])
    rx = np.array([[1.0, 0.0, 0.0], [0.0, cr, -sr], [0.0, sr, cr]])
    return rz @ ry @ rx


def transform(xyz, rpy=(0.0, 0.0, 0.0)) -> np.ndarray:
    """4x4 homogeneous transform from a translation and rpy rotation."""
    t = np.eye(4)
    t[:3, :3] = rotation_rpy(*rpy)
    t[:3, 3] = xyz
    return t


def yaw_of(matrix: np.ndarray) -> float:
    """Heading of a transform's x axis projected on the world xy plane."""
    return math.atan2(matrix[1, 0], matrix[0, 0])
