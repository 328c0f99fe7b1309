"""Voronoi cells by Cao's nearest-first criterion, and sensing-limited coverage regions."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .errors import DuplicatePosition, EmptyRegion, ZeroMass
from .geometry import (
    DEFAULT_RESOLUTION,
    DEFAULT_SEGMENTS,
    ConvexPolygon,
    DensityField,
    RegionMoments,
    as_point,
    clip_normal,
    disk_polygon,
    intersect_convex,
    region_moments,
)

MIN_SEPARATION = 1e-6


@dataclass(frozen=True, eq=False)
class AgentState:
    id: int
    position: np.ndarray
    sensing_radius: float
    comm_radius: float
    heading: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "position", as_point(self.position))
        if not self.sensing_radius > 0:
            raise ValueError(f"agent {self.id}: sensing radius must be positive")
        if not self.comm_radius > 0:
            raise ValueError(f"agent {self.id}: communication radius must be positive")

    def moved(self, position, heading=None) -> "AgentState":
        return AgentState(
            self.id,
            position,
            self.sensing_radius,
            self.comm_radius,
            self.heading if heading is None else heading,
        )


@dataclass(frozen=True, eq=False)
class CoverageRegion:
    agent_id: int
    region: ConvexPolygon
    moments: Optional[RegionMoments] = field(default=None)

    @property
    def is_empty(self) -> bool:
        return self.region.is_empty


class CaoResult(NamedTuple):
    cell: ConvexPolygon
    examined: list  # agents whose bisector was applied, nearest first
    neighbors: list  # agents whose bisector is an edge of the final cell


def _bisector(pi, pj, offset=0.0):
    """Half-plane of points closer to ``pi`` than ``pj``, pulled ``offset`` toward ``pi``."""
    d = pj - pi
    dist = math.hypot(d[0], d[1])
    n = d / dist
    return n, float(n @ (0.5 * (pi + pj))) - offset


def cao_cell(agent: int, positions, Q: ConvexPolygon) -> CaoResult:
    """Voronoi cell of ``agent`` inside ``Q``.

    Other agents are visited in increasing distance.  After each bisector
    cut, the search stops once the next agent is at least ``2R`` away,
    where ``R`` is the farthest vertex of the current cell from the agent:
    such a node's bisector lies beyond every point of the cell.  ``2R`` is
    the radius of the region bounded by the lines through the neighbors
    parallel to their bisectors.
    """
    pts = np.asarray(positions, dtype=float).reshape(-1, 2)
    pi = pts[agent]
    d = np.hypot(*(pts - pi).T)
    order = sorted((float(d[j]), j) for j in range(len(pts)) if j != agent)
    cell = Q
    examined = []
    for dist, j in order:
        if dist < MIN_SEPARATION:
            raise DuplicatePosition(agent, j, dist)
        if cell.is_empty:
            break
        reach = 2.0 * float(np.hypot(*(cell.vertices - pi).T).max())
        if dist >= reach:
            break
        n, c = _bisector(pi, pts[j])
        cell = clip_normal(cell, n, c)
        examined.append(j)
    return CaoResult(cell, examined, _edge_neighbors(pi, pts, examined, cell))


def _edge_neighbors(pi, pts, candidates, cell, tol=1e-9):
    if cell.is_empty:
        return []
    v = cell.vertices
    w = np.roll(v, -1, axis=0)
    out = []
    for j in candidates:
        n, c = _bisector(pi, pts[j])
        on = (np.abs(v @ n - c) <= tol) & (np.abs(w @ n - c) <= tol)
        if on.any():
            out.append(j)
    return sorted(out)


def voronoi_cell(agent: int, positions, Q: ConvexPolygon) -> ConvexPolygon:
    return cao_cell(agent, positions, Q).cell


def coverage_region(
    cell: ConvexPolygon,
    agent: AgentState,
    density: DensityField,
    safety_radius: float = 0.0,
    neighbors: Sequence = (),
    segments: int = DEFAULT_SEGMENTS,
    resolution: int = DEFAULT_RESOLUTION,
) -> CoverageRegion:
    """Intersect ``cell`` with the agent's sensing disk and attach moments.

    With ``safety_radius > 0`` the bisector to every position in
    ``neighbors`` is moved that far toward the agent first, so two adjacent
    regions end up ``2 * safety_radius`` apart.  The working-area boundary
    itself is never shrunk.

    Raises :class:`EmptyRegion` when nothing is left.
    """
    region = _sensed_part(cell, agent, safety_radius, neighbors, segments)
    return CoverageRegion(agent.id, region, region_moments(region, density, resolution))


def _sensed_part(cell, agent, safety_radius, neighbors, segments):
    if safety_radius < 0:
        raise ValueError("safety radius must be non-negative")
    if cell.is_empty:
        raise EmptyRegion(f"agent {agent.id} has an empty Voronoi cell")
    p = agent.position
    region = cell
    if safety_radius > 0:
        for q in neighbors:
            n, c = _bisector(p, as_point(q), safety_radius)
            region = clip_normal(region, n, c)
    region = intersect_convex(region, disk_polygon(p, agent.sensing_radius, segments))
    if region.is_empty:
        raise EmptyRegion(f"agent {agent.id} has an empty coverage region")
    return region


def partition(
    agents: Sequence[AgentState],
    Q: ConvexPolygon,
    density: DensityField,
    safety_radius: float = 0.0,
    segments: int = DEFAULT_SEGMENTS,
    resolution: int = DEFAULT_RESOLUTION,
):
    """Coverage regions for every agent, in agent order.

    An agent whose region vanishes gets a :class:`CoverageRegion` with an
    empty polygon and no moments; one whose region carries no density mass
    keeps the polygon but has no moments either.
    """
    pts = np.array([a.position for a in agents])
    out = []
    for i, a in enumerate(agents):
        res = cao_cell(i, pts, Q)
        try:
            region = _sensed_part(res.cell, a, safety_radius, pts[res.neighbors], segments)
        except EmptyRegion:
            out.append(CoverageRegion(a.id, ConvexPolygon.empty(), None))
            continue
        try:
            moments = region_moments(region, density, resolution)
        except ZeroMass:
            moments = None
        out.append(CoverageRegion(a.id, region, moments))
    return out
