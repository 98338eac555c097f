"""Standalone SVG emitters for layouts and plan Gantt charts.

No plotting dependency: the files are small hand-written SVG trees.
"""

from __future__ import annotations

import math
from pathlib import Path

from .humans import HumanSchedule
from .model import Plan, Scenario
from .packing import PlacementLayout

_KAPPA_COLORS = ["#4daf4a", "#a6d854", "#ffd92f", "#fc8d62", "#e31a1c"]
_TRAVEL_COLOR = "#b3b3b3"
_WAIT_COLOR = "#e0e0e0"
_HUMAN_COLOR = "#80b1d3"


def _kappa_color(kappa: int, levels: int) -> str:
    if levels <= len(_KAPPA_COLORS):
        return _KAPPA_COLORS[kappa]
    idx = round(kappa * (len(_KAPPA_COLORS) - 1) / max(1, levels - 1))
    return _KAPPA_COLORS[idx]


def _rect(x, y, w, h, fill, extra=""):
    return (
        f'<rect x="{x:.2f}" y="{y:.2f}" width="{w:.2f}" height="{h:.2f}" '
        f'fill="{fill}" stroke="#333" stroke-width="0.5" {extra}/>'
    )


def _text(x, y, s, size=9, anchor="start"):
    return (
        f'<text x="{x:.2f}" y="{y:.2f}" font-size="{size}" '
        f'font-family="sans-serif" text-anchor="{anchor}">{s}</text>'
    )


def _rot_rect(cx, cy, l, w, theta, fill):
    deg = math.degrees(theta)
    return (
        f'<g transform="translate({cx:.4f},{cy:.4f}) rotate({deg:.2f})">'
        f'<rect x="{-l / 2:.4f}" y="{-w / 2:.4f}" width="{l:.4f}" height="{w:.4f}" '
        f'fill="{fill}" fill-opacity="0.6" stroke="#333" stroke-width="0.004"/></g>'
    )


def layout_svg(scenario: Scenario, layout: PlacementLayout, path: str | Path) -> None:
    """Top view of boxes, place spots and pick-side items, 1 m = 100 px."""
    xs, ys = [], []
    for b in scenario.boxes:
        xs += [b.pose.x - 0.5, b.pose.x + max(b.dims) + 0.5]
        ys += [b.pose.y - 0.5, b.pose.y + max(b.dims) + 0.5]
    for it in scenario.items:
        for p in it.pick_poses:
            xs += [p.x - 0.5, p.x + 0.5]
            ys += [p.y - 0.5, p.y + 0.5]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    scale = 100.0
    width = (x1 - x0) * scale
    height = (y1 - y0) * scale
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" height="{height:.0f}" '
        f'viewBox="{x0:.3f} {-y1:.3f} {x1 - x0:.3f} {y1 - y0:.3f}">',
        # flip y so the world +y axis points up
        f'<g transform="scale(1,-1)">',
    ]
    palette = ["#8dd3c7", "#fdb462", "#bebada", "#fb8072"]
    for j, b in enumerate(scenario.boxes):
        c, s = math.cos(b.pose.theta), math.sin(b.pose.theta)
        pts = []
        for dx, dy in ((0, 0), (b.dims[0], 0), (b.dims[0], b.dims[1]), (0, b.dims[1])):
            pts.append(f"{b.pose.x + c * dx - s * dy:.4f},{b.pose.y + s * dx + c * dy:.4f}")
        parts.append(
            f'<polygon points="{" ".join(pts)}" fill="none" stroke="#000" stroke-width="0.008"/>'
        )
    for i, it in enumerate(scenario.items):
        color = palette[i % len(palette)]
        for j, spots in enumerate(layout.spots[i]):
            for p in spots:
                parts.append(_rot_rect(p.x, p.y, it.dims[0], it.dims[1], p.theta, color))
        for p in it.pick_poses:
            parts.append(_rot_rect(p.x, p.y, it.dims[0], it.dims[1], p.theta, color))
    parts.append("</g></svg>")
    Path(path).write_text("\n".join(parts))


def gantt_svg(plan: Plan, schedule: HumanSchedule, levels: int, path: str | Path) -> None:
    """Two-row Gantt: robot plan on top (travel grey, tasks colored by
    scaling level), human schedule below."""
    t_end = max(plan.total_time, schedule.horizon_end, 1.0)
    margin, row_h, gap = 60.0, 36.0, 18.0
    scale = 900.0 / t_end
    width = margin + 900.0 + 20.0
    height = 2 * row_h + 3 * gap + 30.0
    y_robot = gap
    y_human = gap + row_h + gap
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" height="{height:.0f}">',
        _text(8, y_robot + row_h / 2 + 3, "robot"),
        _text(8, y_human + row_h / 2 + 3, "human"),
    ]
    for w in plan.waits:
        parts.append(
            _rect(margin + w.start * scale, y_robot, (w.end - w.start) * scale, row_h, _WAIT_COLOR)
        )
    for t in plan.tasks:
        x = margin + t.start * scale
        parts.append(_rect(x, y_robot, t.travel * scale, row_h, _TRAVEL_COLOR))
        x_task = x + t.travel * scale
        parts.append(
            _rect(x_task, y_robot, t.duration * scale, row_h, _kappa_color(t.kappa, levels))
        )
        parts.append(
            _text(x_task + 2, y_robot + row_h / 2 + 3, f"{t.item_type}.{t.item} k{t.kappa}", 8)
        )
    for c, task in enumerate(schedule.tasks):
        start = task.start
        end = schedule.tasks[c + 1].start if c + 1 < len(schedule.tasks) else max(
            schedule.horizon_end, t_end
        )
        parts.append(_rect(margin + start * scale, y_human, (end - start) * scale, row_h, _HUMAN_COLOR))
        label = task.kind if task.station is None else f"{task.kind} St.{task.station}"
        parts.append(_text(margin + start * scale + 2, y_human + row_h / 2 + 3, label, 8))
    axis_y = y_human + row_h + gap
    parts.append(
        f'<line x1="{margin}" y1="{axis_y}" x2="{margin + 900}" y2="{axis_y}" stroke="#000"/>'
    )
    step = max(1.0, round(t_end / 12.0))
    tick = 0.0
    while tick <= t_end + 1e-9:
        x = margin + tick * scale
        parts.append(f'<line x1="{x:.1f}" y1="{axis_y}" x2="{x:.1f}" y2="{axis_y + 4}" stroke="#000"/>')
        parts.append(_text(x, axis_y + 14, f"{tick:.0f}s", 8, "middle"))
        tick += step
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts))
