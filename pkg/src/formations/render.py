"""Static SVG pitch diagrams of a matched segment."""

from dataclasses import dataclass
from pathlib import Path
from xml.sax.saxutils import escape, quoteattr

import numpy as np

from .templates import TEMPLATE_FRAME, bounds


class RenderError(ValueError):
    pass


@dataclass(frozen=True)
class RenderSpec:
    pitch_length: float = 105.0
    pitch_width: float = 68.0
    players: bool = True
    slots: bool = True
    lines: bool = True
    labels: bool = True
    output_path: str | None = None
    px_per_meter: float = 8.0
    margin: float = 3.0

    def __post_init__(self):
        if self.pitch_length <= 0 or self.pitch_width <= 0 or self.px_per_meter <= 0:
            raise RenderError("pitch dimensions and resolution must be positive")


def _fmt(v):
    return f"{v:.2f}"


def _box_map(points, src_lo, src_hi, dst_lo, dst_hi):
    out = np.empty_like(points)
    for a in range(2):
        span = src_hi[a] - src_lo[a]
        if span == 0:
            out[:, a] = (dst_lo[a] + dst_hi[a]) / 2
        else:
            out[:, a] = (points[:, a] - src_lo[a]) / span * (dst_hi[a] - dst_lo[a]) + dst_lo[a]
    return out


def slot_positions_on_pitch(player_xy, result, template, spec, target=None):
    """Template slots expressed in pitch coordinates.

    Scaled matches invert the scaling map (template box -> players' box), so
    slots sit over the players they were compared with. Unscaled matches map
    the template frame onto the pitch.
    """
    pts = np.asarray(template.positions, dtype=float)
    if result.scaled:
        b = target if target is not None else bounds(template)
        return _box_map(pts, (b.min_x, b.min_y), (b.max_x, b.max_y), player_xy.min(axis=0), player_xy.max(axis=0))
    L, W = spec.pitch_length, spec.pitch_width
    return _box_map(pts, (0.0, 0.0), TEMPLATE_FRAME, (-L / 2, -W / 2), (L / 2, W / 2))


def render_match(segment, result, spec: RenderSpec = RenderSpec(), template=None, target=None):
    """Draw players, template slots and assignment lines for one segment.

    Output bytes depend only on the inputs.
    """
    positions = segment.mean_positions
    if set(result.labels) != set(positions):
        raise RenderError("result labels do not cover exactly the segment's players")
    ids = sorted(positions)
    xy = np.array([positions[p] for p in ids], dtype=float).reshape(-1, 2)

    L, W, m, k = spec.pitch_length, spec.pitch_width, spec.margin, spec.px_per_meter

    def sx(x):
        return x + L / 2 + m

    def sy(y):
        return W / 2 - y + m

    vw, vh = L + 2 * m, W + 2 * m
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_fmt(vw * k)}" '
        f'height="{_fmt(vh * k)}" viewBox="0 0 {_fmt(vw)} {_fmt(vh)}">',
        f'<rect class="pitch" x="{_fmt(m)}" y="{_fmt(m)}" width="{_fmt(L)}" height="{_fmt(W)}" '
        'fill="#3a7d44" stroke="white" stroke-width="0.3"/>',
        f'<line class="pitch" x1="{_fmt(sx(0))}" y1="{_fmt(m)}" x2="{_fmt(sx(0))}" y2="{_fmt(m + W)}" '
        'stroke="white" stroke-width="0.3"/>',
        f'<circle class="pitch" cx="{_fmt(sx(0))}" cy="{_fmt(sy(0))}" r="9.15" fill="none" '
        'stroke="white" stroke-width="0.3"/>',
    ]

    slot_xy = None
    if template is not None and (spec.slots or spec.lines):
        slot_xy = slot_positions_on_pitch(xy, result, template, spec, target)
        slot_of = {lab: i for i, lab in enumerate(template.labels)}

    if spec.lines and slot_xy is not None:
        for pid, (x, y) in zip(ids, xy):
            sxy = slot_xy[slot_of[result.labels[pid]]]
            parts.append(
                f'<line class="assignment" x1="{_fmt(sx(x))}" y1="{_fmt(sy(y))}" '
                f'x2="{_fmt(sx(sxy[0]))}" y2="{_fmt(sy(sxy[1]))}" stroke="#ffd166" stroke-width="0.2"/>'
            )
    if spec.slots and slot_xy is not None:
        for lab, (x, y) in zip(template.labels, slot_xy):
            parts.append(
                f'<circle class="slot" cx="{_fmt(sx(x))}" cy="{_fmt(sy(y))}" r="1.2" fill="none" '
                f'stroke="#ffd166" stroke-width="0.3"><title>{escape(lab)}</title></circle>'
            )
    if spec.players:
        for pid, (x, y) in zip(ids, xy):
            parts.append(
                f'<circle class="player" data-player={quoteattr(str(pid))} cx="{_fmt(sx(x))}" '
                f'cy="{_fmt(sy(y))}" r="1" fill="#1d3557" stroke="white" stroke-width="0.2"/>'
            )
    if spec.labels:
        for pid, (x, y) in zip(ids, xy):
            parts.append(
                f'<text class="label" x="{_fmt(sx(x))}" y="{_fmt(sy(y) - 1.6)}" font-size="2" '
                f'text-anchor="middle" fill="white">{escape(result.labels[pid])}</text>'
            )
    if spec.players or spec.labels:
        parts.append(
            f'<text class="title" x="{_fmt(m)}" y="{_fmt(m - 0.8)}" font-size="2.2" fill="black">'
            f"{escape(str(segment.team_id))} {escape(result.formation_name)}</text>"
        )
    parts.append("</svg>")
    svg = "\n".join(parts) + "\n"
    if spec.output_path:
        Path(spec.output_path).write_text(svg, encoding="utf-8")
    return svg
