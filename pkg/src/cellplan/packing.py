"""Place-side layout: greedy best-fit packing of item footprints into boxes.

Packing is single-layer and planar; item rotations are restricted to 0 and
pi/2 about the vertical axis (suction-cup handling). Placement anchors are
the box corner plus the corners of already-placed footprints; among the
feasible (anchor, rotation) pairs the snuggest one wins, i.e. the one with
the least leftover along its tighter free direction. Ties prefer smaller
x, then smaller y, then rotation 0.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from shapely.geometry import Polygon

from .errors import EmptyBoxWarning, LayoutInfeasible
from .geometry import PlanarPose, wrap_angle
from .model import BoxSpec, ItemType, Scenario

EPS = 1e-9
OVERLAP_AREA_EPS = 1e-9


@dataclass(frozen=True)
class PlacementLayout:
    """Capacities and spot poses per (type, box-of-type).

    ``spots[i][j][k]`` is the world pose of the k-th spot in the j-th box
    assigned to type i; ``alpha[i][j]`` its capacity.
    """

    alpha: tuple[tuple[int, ...], ...]
    spots: tuple[tuple[tuple[PlanarPose, ...], ...], ...]

    def capacity(self, item: int) -> int:
        return sum(self.alpha[item])


def _footprint(dims: tuple[float, float, float], rot: int) -> tuple[float, float]:
    l, w, _ = dims
    return (l, w) if rot == 0 else (w, l)


def _overlaps(rects, x0: float, y0: float, x1: float, y1: float, gap: float) -> bool:
    for rx0, ry0, rx1, ry1 in rects:
        if x0 < rx1 + gap - EPS and x1 > rx0 - gap + EPS and y0 < ry1 + gap - EPS and y1 > ry0 - gap + EPS:
            return True
    return False


def _available(rects, ax, ay, fw, fh, lim_x: float, lim_y: float, gap: float):
    """Free extents right/up from an anchor before a wall or obstacle."""
    avail_x = lim_x - ax
    avail_y = lim_y - ay
    for rx0, ry0, rx1, ry1 in rects:
        if rx0 >= ax - EPS and ry0 - gap < ay + fh - EPS and ry1 + gap > ay + EPS:
            avail_x = min(avail_x, rx0 - gap - ax)
        if ry0 >= ay - EPS and rx0 - gap < ax + fw - EPS and rx1 + gap > ax + EPS:
            avail_y = min(avail_y, ry0 - gap - ay)
    return avail_x, avail_y


def _pack_box(box_dims, item_dims, clearance: float, cap: int | None = None):
    """Greedy fill of one box footprint; returns (x0, y0, x1, y1, rot) rects."""
    lim_x = box_dims[0] - clearance
    lim_y = box_dims[1] - clearance
    placed: list[tuple[float, float, float, float, int]] = []
    while cap is None or len(placed) < cap:
        rects = [(r[0], r[1], r[2], r[3]) for r in placed]
        anchors = {(clearance, clearance)}
        for rx0, ry0, rx1, ry1 in rects:
            anchors.add((rx1 + clearance, ry0))
            anchors.add((rx0, ry1 + clearance))
            anchors.add((rx1 + clearance, clearance))
            anchors.add((clearance, ry1 + clearance))
        best = None
        for ax, ay in sorted(anchors):
            for rot in (0, 1):
                fw, fh = _footprint(item_dims, rot)
                if ax + fw > lim_x + EPS or ay + fh > lim_y + EPS:
                    continue
                if _overlaps(rects, ax, ay, ax + fw, ay + fh, clearance):
                    continue
                avail_x, avail_y = _available(rects, ax, ay, fw, fh, lim_x, lim_y, clearance)
                score = min(avail_x - fw, avail_y - fh)
                key = (score, ax, ay, rot)
                if best is None or key < best[0]:
                    best = (key, (ax, ay, ax + fw, ay + fh, rot))
        if best is None:
            break
        placed.append(best[1])
    return placed


def _spot_world(box: BoxSpec, rect) -> PlanarPose:
    x0, y0, x1, y1, rot = rect
    cx = (x0 + x1) / 2.0
    cy = (y0 + y1) / 2.0
    c, s = math.cos(box.pose.theta), math.sin(box.pose.theta)
    wx = box.pose.x + c * cx - s * cy
    wy = box.pose.y + s * cx + c * cy
    theta = wrap_angle(box.pose.theta + (0.0 if rot == 0 else math.pi / 2.0))
    return PlanarPose(wx, wy, theta)


def compute_layout(items, boxes, clearance: float = 0.001) -> PlacementLayout:
    """Best-fit layout over all boxes; raises LayoutInfeasible when a type's
    item count exceeds its total capacity."""
    alpha = []
    spots = []
    for i, item in enumerate(items):
        row_alpha = []
        row_spots = []
        for j, box in enumerate(boxes):
            if box.item != i:
                continue
            if box.dims[2] + EPS < item.dims[2]:
                rects = []
            else:
                rects = _pack_box(box.dims, item.dims, clearance)
            if not rects:
                warnings.warn(f"type {i}, box {j}: no spot fits", EmptyBoxWarning)
            row_alpha.append(len(rects))
            row_spots.append(tuple(_spot_world(box, r) for r in rects))
        if sum(row_alpha) < item.count:
            raise LayoutInfeasible(
                f"type {i}: {item.count} items but capacity {sum(row_alpha)}"
            )
        alpha.append(tuple(row_alpha))
        spots.append(tuple(row_spots))
    return PlacementLayout(alpha=tuple(alpha), spots=tuple(spots))


def layout_for(scenario: Scenario) -> PlacementLayout:
    return compute_layout(scenario.items, scenario.boxes, scenario.sim.clearance)


def _rect_polygon(cx: float, cy: float, l: float, w: float, theta: float) -> Polygon:
    c, s = math.cos(theta), math.sin(theta)
    hx, hy = l / 2.0, w / 2.0
    corners = []
    for dx, dy in ((-hx, -hy), (hx, -hy), (hx, hy), (-hx, hy)):
        corners.append((cx + c * dx - s * dy, cy + s * dx + c * dy))
    return Polygon(corners)


def _box_polygon(box: BoxSpec) -> Polygon:
    c, s = math.cos(box.pose.theta), math.sin(box.pose.theta)
    corners = []
    for dx, dy in ((0.0, 0.0), (box.dims[0], 0.0), (box.dims[0], box.dims[1]), (0.0, box.dims[1])):
        corners.append((box.pose.x + c * dx - s * dy, box.pose.y + s * dx + c * dy))
    return Polygon(corners)


def verify_layout(layout: PlacementLayout, items, boxes) -> bool:
    """Independent geometric check: every footprint inside its box, no two
    footprints in the same box overlapping (area tolerance 1e-9 m^2)."""
    for i, item in enumerate(items):
        type_boxes = [b for b in boxes if b.item == i]
        if len(layout.alpha[i]) != len(type_boxes):
            return False
        for j, box in enumerate(type_boxes):
            poses = layout.spots[i][j]
            if len(poses) != layout.alpha[i][j]:
                return False
            box_poly = _box_polygon(box)
            polys = [
                _rect_polygon(p.x, p.y, item.dims[0], item.dims[1], p.theta) for p in poses
            ]
            for poly in polys:
                if poly.difference(box_poly).area > OVERLAP_AREA_EPS:
                    return False
            for a in range(len(polys)):
                for b in range(a + 1, len(polys)):
                    if polys[a].intersection(polys[b]).area > OVERLAP_AREA_EPS:
                        return False
    return True
