"""Static SVG snapshots of a world state.

Written by hand; a layout needs a handful of polygons, lines and circles,
which does not justify a plotting dependency.
"""

from __future__ import annotations

from html import escape
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

PANEL = 420  # px, square drawing area per panel
MARGIN = 24
TITLE = 20


def _frame(world):
    pts = [world.positions]
    if world.targets:
        pts.append(np.array([t.position for t in world.targets]))
    if not world.Q.is_empty:
        pts.append(world.Q.vertices)
    s = world.agents[0].sensing_radius
    allp = np.vstack(pts)
    lo = allp.min(axis=0) - s
    hi = allp.max(axis=0) + s
    return lo, hi


class _Canvas:
    def __init__(self, lo, hi, ox, oy):
        span = float(max(hi - lo))
        # square frame centered on the content
        self.lo = 0.5 * (lo + hi) - 0.5 * span
        self.scale = PANEL / span if span > 0 else 1.0
        self.ox, self.oy = ox, oy

    def xy(self, p):
        x = self.ox + (p[0] - self.lo[0]) * self.scale
        y = self.oy + PANEL - (p[1] - self.lo[1]) * self.scale
        return x, y

    def poly(self, verts, **style):
        pts = " ".join("%.2f,%.2f" % self.xy(v) for v in verts)
        return f'<polygon points="{pts}" {_style(style)}/>'

    def line(self, a, b, **style):
        (x1, y1), (x2, y2) = self.xy(a), self.xy(b)
        return f'<line x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}" {_style(style)}/>'

    def circle(self, c, radius_px, **style):
        x, y = self.xy(c)
        return f'<circle cx="{x:.2f}" cy="{y:.2f}" r="{radius_px:.2f}" {_style(style)}/>'


def _style(style):
    return " ".join(f'{k.replace("_", "-")}="{v}"' for k, v in style.items())


def _panel(world, ox, oy, title: Optional[str]):
    lo, hi = _frame(world)
    cv = _Canvas(lo, hi, ox, oy + TITLE)
    out = []
    if title:
        out.append(f'<text x="{ox:.1f}" y="{oy + 14:.1f}" font-size="13" font-family="sans-serif">{escape(title)}</text>')
    out.append(f'<rect x="{ox}" y="{oy + TITLE}" width="{PANEL}" height="{PANEL}" fill="white" stroke="#bbb"/>')
    if not world.Q.is_empty:
        mode = getattr(world.mode, "value", world.mode)
        if mode == "boundary":
            out.append(cv.poly(world.Q.vertices, fill="none", stroke="#d08000", stroke_width=1.5, stroke_dasharray="6 3"))
        else:
            out.append(cv.poly(world.Q.vertices, fill="none", stroke="black", stroke_width=1.2))
    for reg in world.regions:
        if not reg.region.is_empty:
            out.append(cv.poly(reg.region.vertices, fill="#4a90d9", fill_opacity=0.15, stroke="#2a60a0", stroke_width=0.8))
    pts = world.positions
    if world.tree is not None:
        for i, j, _ in world.tree.edges:
            out.append(cv.line(pts[i], pts[j], stroke="#2a9d3a", stroke_width=1.4))
    for t in world.targets:
        x, y = cv.xy(t.position)
        out.append(f'<path d="M{x - 4:.2f},{y - 4:.2f} L{x + 4:.2f},{y + 4:.2f} M{x - 4:.2f},{y + 4:.2f} L{x + 4:.2f},{y - 4:.2f}" stroke="#c0392b" stroke-width="1.6"/>')
    for a in world.agents:
        out.append(cv.circle(a.position, 4.0, fill="#1f3b73", stroke="white", stroke_width=0.8))
    return out


def render_panels(worlds: Sequence, titles: Sequence[Optional[str]] = ()) -> str:
    """Side-by-side panels, one per world, as an SVG document."""
    worlds = list(worlds)
    titles = list(titles) + [None] * (len(worlds) - len(titles))
    width = MARGIN + len(worlds) * (PANEL + MARGIN)
    height = 2 * MARGIN + TITLE + PANEL
    body = []
    for k, (w, t) in enumerate(zip(worlds, titles)):
        body += _panel(w, MARGIN + k * (PANEL + MARGIN), MARGIN, t)
    head = f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">'
    return "\n".join([head, *body, "</svg>"]) + "\n"


def emit_snapshot(world, path, title: Optional[str] = None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(render_panels([world], [title if title is not None else f"step {world.step}"]))
    return path
