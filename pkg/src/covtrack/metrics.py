"""Coverage costs, the sensing-reduction bound, and tracking metrics."""

from __future__ import annotations

import math
from dataclasses import astuple, dataclass, fields
from typing import NamedTuple, Sequence

import numpy as np

from .errors import EmptyRegion, ZeroMass
from .geometry import (
    DEFAULT_RESOLUTION,
    ConvexPolygon,
    DensityField,
    Uniform,
    grid_cells,
    moments_numeric,
    polar_moment,
)
from .tracking import formation_center

BOUND_SLACK = 1e-9


@dataclass(frozen=True)
class MetricsRecord:
    step: int
    cost_core: float
    cost_full: float
    sum_dist: float
    mean_dist: float
    covered_targets: int
    min_tree_slack: float

    @classmethod
    def columns(cls):
        return [f.name for f in fields(cls)]

    def row(self):
        return list(astuple(self))


def _mass(poly: ConvexPolygon, density: DensityField, resolution: int) -> float:
    if poly.is_empty:
        return 0.0
    if isinstance(density, Uniform):
        return density.value * poly.area
    try:
        return moments_numeric(poly, density, resolution).mass
    except ZeroMass:
        return 0.0


def cost_limited(agents, regions, density: DensityField, Q: ConvexPolygon, resolution: int = DEFAULT_RESOLUTION):
    """``(cost_core, cost_full)`` for the current coverage regions.

    ``cost_core`` integrates ``|q - p_i|^2 phi`` over each region.
    ``cost_full`` adds ``s^2`` times the density mass of the working area
    left outside every region, i.e. the saturated sensing performance.
    """
    core = 0.0
    covered = 0.0
    for agent, reg in zip(agents, regions):
        if reg.region.is_empty:
            continue
        try:
            core += polar_moment(reg.region, agent.position, density, resolution)
        except (ZeroMass, EmptyRegion):
            continue
        covered += reg.moments.mass if reg.moments is not None else 0.0
    s = agents[0].sensing_radius
    # separate quadrature grids can disagree by rounding when W covers Q
    tail = max(_mass(Q, density, resolution) - covered, 0.0)
    return core, core + s * s * tail


def limited_cost(positions, density: DensityField, Q: ConvexPolygon, s: float, resolution: int = 256) -> float:
    """Sensing-limited cost with exact disks, by quadrature over ``Q``.

    Each point contributes ``min(|q - p|^2, s^2) phi(q)`` for its nearest
    agent, which is the same as integrating over the Voronoi partition.
    """
    pts = np.asarray(positions, dtype=float).reshape(-1, 2)
    q, w = grid_cells(Q, resolution)
    d2 = ((q[:, None, :] - pts[None, :, :]) ** 2).sum(-1).min(axis=1)
    return float((w * density(q) * np.minimum(d2, s * s)).sum())


class CommBound(NamedTuple):
    h_s: float
    h_s_star: float
    beta: float
    holds: bool


def verify_comm_bound(positions, density: DensityField, Q: ConvexPolygon, s: float, s_star: float, resolution: int = 256) -> CommBound:
    """Check ``beta H_s >= H_s* >= H_s > 0`` for a reduced sensing radius ``s``.

    ``beta = s*^2 / s^2`` follows from the quadratic performance function.
    Both costs share one quadrature grid, so the pointwise ordering of the
    integrands carries over to the sums.
    """
    if not 0 < s <= s_star:
        raise ValueError(f"need 0 < s <= s_star, got s={s}, s_star={s_star}")
    h_s = limited_cost(positions, density, Q, s, resolution)
    h_star = limited_cost(positions, density, Q, s_star, resolution)
    beta = (s_star * s_star) / (s * s)
    holds = beta * h_s + BOUND_SLACK >= h_star and h_star + BOUND_SLACK >= h_s and h_s > 0
    return CommBound(h_s, h_star, beta, bool(holds))


def sum_distance(agents, center) -> float:
    c = np.asarray(center, dtype=float)
    return math.fsum(float(np.hypot(*(a.position - c))) for a in agents)


def covered_targets(agents, targets) -> int:
    """Targets within sensing range of at least one agent."""
    if not agents or not targets:
        return 0
    p = np.array([a.position for a in agents])
    s = np.array([a.sensing_radius for a in agents])
    o = np.array([t.position for t in targets])
    d = np.hypot(*(o[:, None, :] - p[None, :, :]).transpose(2, 0, 1))
    return int(np.any(d <= s[None, :], axis=1).sum())


def measure(world, resolution: int = DEFAULT_RESOLUTION) -> MetricsRecord:
    """Metric row for a synchronized world state."""
    agents = world.agents
    core, full = cost_limited(agents, world.regions, world.density, world.Q, resolution)
    if world.targets:
        total = sum_distance(agents, formation_center(world.targets))
    else:
        total = 0.0
    r = agents[0].comm_radius
    pts = np.array([a.position for a in agents])
    slack = r - world.tree.longest_edge(pts) if world.tree is not None else r
    return MetricsRecord(
        step=world.step,
        cost_core=core,
        cost_full=full,
        sum_dist=total,
        mean_dist=total / len(agents),
        covered_targets=covered_targets(agents, world.targets),
        min_tree_slack=slack,
    )
