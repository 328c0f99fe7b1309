"""Target formations and the two tracking mechanisms.

Targets are scripted leaders: their positions are a pure function of the
trajectory description and the step index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from .geometry import ConvexPolygon, GaussianMixture, as_point

# extent added on each side of a degenerate bounding rectangle (meters)
DEGENERATE_PAD = 1e-3


@dataclass(frozen=True, eq=False)
class TargetState:
    id: int
    position: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "position", as_point(self.position))


@dataclass(frozen=True)
class GridLayout:
    """``rows`` x ``cols`` targets, ``spacing`` apart, centered on ``center``.

    Targets are numbered row by row starting at the lowest row, left to right.
    """

    rows: int
    cols: int
    spacing: float
    center: Tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ValueError("formation needs at least one row and one column")
        if not self.spacing > 0:
            raise ValueError("formation spacing must be positive")

    def positions(self) -> np.ndarray:
        xs = (np.arange(self.cols) - (self.cols - 1) / 2.0) * self.spacing
        ys = (np.arange(self.rows) - (self.rows - 1) / 2.0) * self.spacing
        gx, gy = np.meshgrid(xs, ys, indexing="xy")
        return np.column_stack([gx.ravel(), gy.ravel()]) + np.asarray(self.center, dtype=float)


@dataclass(frozen=True)
class Static:
    pass


@dataclass(frozen=True)
class Line:
    direction: Tuple[float, float] = (1.0, 0.0)
    speed: float = 0.3  # m/step

    def __post_init__(self):
        if self.speed < 0:
            raise ValueError("speed must be non-negative")
        if math.hypot(*self.direction) == 0:
            raise ValueError("line direction must be non-zero")


@dataclass(frozen=True)
class Arc:
    """Each target circles ``center`` at the same linear ``speed``.

    Radii come from the layout, so inner targets sweep larger angles than
    outer ones.  A target sitting exactly on the center stays put.
    """

    center: Tuple[float, float]
    speed: float
    clockwise: bool = False

    def __post_init__(self):
        if self.speed < 0:
            raise ValueError("speed must be non-negative")


@dataclass(frozen=True)
class Scripted:
    """Explicit per-step target positions; the last set is held afterwards."""

    waypoints: tuple

    def __post_init__(self):
        if len(self.waypoints) == 0:
            raise ValueError("scripted path needs at least one waypoint set")


Path = Union[Static, Line, Arc, Scripted]


@dataclass(frozen=True)
class FormationTrajectory:
    layout: GridLayout
    path: Path = field(default_factory=Static)

    @property
    def count(self) -> int:
        if isinstance(self.path, Scripted):
            return len(self.path.waypoints[0])
        return self.layout.rows * self.layout.cols

    def radii(self) -> Optional[np.ndarray]:
        if not isinstance(self.path, Arc):
            return None
        return np.hypot(*(self.layout.positions() - np.asarray(self.path.center, dtype=float)).T)


def advance_targets(traj: FormationTrajectory, step: int) -> List[TargetState]:
    if step < 0:
        raise ValueError("step must be non-negative")
    path = traj.path
    if isinstance(path, Scripted):
        k = min(step, len(path.waypoints) - 1)
        pts = np.asarray(path.waypoints[k], dtype=float).reshape(-1, 2)
    else:
        pts = traj.layout.positions()
        if isinstance(path, Line):
            d = np.asarray(path.direction, dtype=float)
            pts = pts + step * path.speed * d / np.hypot(*d)
        elif isinstance(path, Arc):
            c = np.asarray(path.center, dtype=float)
            rel = pts - c
            rad = np.hypot(rel[:, 0], rel[:, 1])
            theta = np.arctan2(rel[:, 1], rel[:, 0])
            sweep = np.divide(step * path.speed, rad, out=np.zeros_like(rad), where=rad > 0)
            theta = theta - sweep if path.clockwise else theta + sweep
            pts = c + rad[:, None] * np.column_stack([np.cos(theta), np.sin(theta)])
    return [TargetState(k, p) for k, p in enumerate(pts)]


def update_density(targets: Sequence[TargetState]) -> GaussianMixture:
    if not targets:
        raise ValueError("importance density needs at least one target")
    return GaussianMixture(np.array([t.position for t in targets]))


def redefine_boundary(agents, targets) -> ConvexPolygon:
    """Axis-aligned bounding rectangle of every agent and target."""
    pts = np.array([a.position for a in agents] + [t.position for t in targets])
    if len(agents) == 0 or len(targets) == 0:
        raise ValueError("need at least one agent and one target")
    lo = pts.min(axis=0)
    hi = pts.max(axis=0)
    flat = (hi - lo) < DEGENERATE_PAD
    lo = np.where(flat, lo - DEGENERATE_PAD, lo)
    hi = np.where(flat, hi + DEGENERATE_PAD, hi)
    return ConvexPolygon.rectangle(lo[0], hi[0], lo[1], hi[1])


def formation_center(targets: Sequence[TargetState]) -> np.ndarray:
    if not targets:
        raise ValueError("formation center needs at least one target")
    return np.mean([t.position for t in targets], axis=0)
