"""Synchronized Lloyd iteration with spanning-tree connectivity maintenance."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from .connectivity import SpanningTree, compute_mst, limit_goal, motion_constraints
from .errors import DisconnectedGraph, NonConvergence
from .geometry import DEFAULT_RESOLUTION, DEFAULT_SEGMENTS, ConvexPolygon, DensityField, Uniform, as_point
from .metrics import MetricsRecord, measure
from .partition import AgentState, CoverageRegion, partition
from .tracking import FormationTrajectory, TargetState, advance_targets, redefine_boundary, update_density

log = logging.getLogger(__name__)


class Mode(str, Enum):
    IMPORTANCE = "importance"
    BOUNDARY = "boundary"
    STATIC = "static"


@dataclass(frozen=True)
class Integrator:
    pass


@dataclass(frozen=True)
class Unicycle:
    max_linear: float  # m per micro-step
    max_angular: float  # rad per micro-step
    tolerance: float = 0.065  # m
    max_micro_steps: int = 10_000

    def __post_init__(self):
        if not self.max_linear > 0 or not self.max_angular > 0:
            raise ValueError("unicycle speed limits must be positive")
        if not self.tolerance > 0:
            raise ValueError("unicycle distance tolerance must be positive")


Kinematics = Union[Integrator, Unicycle]


@dataclass(frozen=True, eq=False)
class WorldState:
    step: int
    Q: ConvexPolygon
    agents: Tuple[AgentState, ...]
    targets: Tuple[TargetState, ...]
    density: DensityField
    tree: Optional[SpanningTree]
    regions: Tuple[CoverageRegion, ...]
    # longest tree link seen while unicycles were between goals
    transit_link: Optional[float] = None
    mode: Optional[Mode] = None

    @property
    def positions(self) -> np.ndarray:
        return np.array([a.position for a in self.agents])

    @property
    def comm_radius(self) -> float:
        return self.agents[0].comm_radius


def _wrap(angle):
    return (angle + math.pi) % (2.0 * math.pi) - math.pi


def unicycle_navigate(pose, goal, cfg: Unicycle) -> List[Tuple[np.ndarray, float]]:
    """Turn-then-drive goal-to-goal controller.

    Each micro-step turns toward the goal by at most ``max_angular``; once
    the heading error fits in one turn the robot also drives straight at
    the goal by up to ``max_linear``.  Returns the poses after every
    micro-step, empty if the start is already within ``tolerance``.
    """
    p = as_point(pose[0])
    heading = float(pose[1])
    g = as_point(goal)
    out = []
    for _ in range(cfg.max_micro_steps + 1):
        d = g - p
        dist = math.hypot(d[0], d[1])
        if dist <= cfg.tolerance:
            return out
        if len(out) == cfg.max_micro_steps:
            break
        bearing = math.atan2(d[1], d[0])
        err = _wrap(bearing - heading)
        if abs(err) > cfg.max_angular:
            heading = _wrap(heading + math.copysign(cfg.max_angular, err))
        else:
            heading = bearing
            p = p + (min(cfg.max_linear, dist) / dist) * d
        out.append((p, heading))
    raise NonConvergence(
        f"still {dist:.3g} m from goal after {cfg.max_micro_steps} micro-steps"
    )


def _clip_to(Q: ConvexPolygon, p, goal):
    """Largest prefix of the segment p -> goal that stays inside Q."""
    if Q.contains(goal, tol=1e-12)[0]:
        return goal
    n, c = Q.halfplanes()
    d = goal - p
    nd = n @ d
    slack = c - n @ p
    with np.errstate(divide="ignore", invalid="ignore"):
        ks = np.where(nd > 0, slack / nd, np.inf)
    k = min(max(float(ks.min()), 0.0), 1.0)
    return p + k * d


def _mode_update(mode, Q, density, agents, targets):
    if mode is Mode.IMPORTANCE:
        return Q, update_density(targets)
    if mode is Mode.BOUNDARY:
        return redefine_boundary(agents, targets), Uniform(1.0)
    return Q, density


def _tree(positions, r, step):
    try:
        return compute_mst(positions, r)
    except DisconnectedGraph as exc:
        exc.step = step
        raise


def lloyd_step(
    world: WorldState,
    mode: Union[Mode, str],
    safety_radius: float = 0.0,
    *,
    trajectory: Optional[FormationTrajectory] = None,
    kinematics: Kinematics = Integrator(),
    segments: int = DEFAULT_SEGMENTS,
    resolution: int = DEFAULT_RESOLUTION,
) -> WorldState:
    """One synchronized iteration.

    Targets move first, then the working area (boundary mode) or the
    density (importance mode) is refreshed, every agent computes its
    coverage centroid, the spanning tree is rebuilt, goals are pulled back
    to keep the tree links, and agents travel to their goals.  An agent
    whose coverage region is empty or massless holds position.
    """
    mode = Mode(mode)
    step = world.step + 1
    targets = tuple(advance_targets(trajectory, step)) if trajectory is not None else world.targets
    Q, density = _mode_update(mode, world.Q, world.density, world.agents, targets)

    agents = world.agents
    pts = np.array([a.position for a in agents])
    regions = partition(agents, Q, density, safety_radius, segments, resolution)
    centroids = [
        reg.moments.centroid if reg.moments is not None else pts[i] for i, reg in enumerate(regions)
    ]

    r = agents[0].comm_radius
    tree = _tree(pts, r, step)
    limits = motion_constraints(tree, pts, r)
    goals = [_clip_to(Q, pts[i], limit_goal(pts[i], centroids[i], limits[i])) for i in range(len(agents))]

    transit = None
    if isinstance(kinematics, Unicycle):
        paths = []
        for a, g in zip(agents, goals):
            try:
                paths.append(unicycle_navigate((a.position, a.heading), g, kinematics))
            except NonConvergence as exc:
                exc.step = step
                raise
        moved, transit = _synchronize(agents, paths, tree)
        log.debug("step %d: longest link in transit %.4f m (r = %.4f)", step, transit, r)
    else:
        moved = tuple(a.moved(g) for a, g in zip(agents, goals))

    new_regions = partition(moved, Q, density, safety_radius, segments, resolution)
    return WorldState(step, Q, moved, targets, density, tree, tuple(new_regions), transit, mode)


def _synchronize(agents, paths, tree):
    # all agents advance one micro-step at a time; the barrier is the longest path
    horizon = max((len(p) for p in paths), default=0)
    track = np.array([a.position for a in agents])
    worst = tree.longest_edge(track)
    for k in range(horizon):
        for i, path in enumerate(paths):
            if k < len(path):
                track[i] = path[k][0]
        worst = max(worst, tree.longest_edge(track))
    moved = tuple(a.moved(*path[-1]) if path else a for a, path in zip(agents, paths))
    return moved, worst


def initial_world(
    agents: Sequence[AgentState],
    Q0: ConvexPolygon,
    mode: Union[Mode, str],
    trajectory: Optional[FormationTrajectory] = None,
    density: DensityField = Uniform(1.0),
    safety_radius: float = 0.0,
    segments: int = DEFAULT_SEGMENTS,
    resolution: int = DEFAULT_RESOLUTION,
) -> WorldState:
    """Step-0 state with the working area and density already matched to ``mode``."""
    mode = Mode(mode)
    agents = tuple(agents)
    targets = tuple(advance_targets(trajectory, 0)) if trajectory is not None else ()
    if mode is not Mode.STATIC and not targets:
        raise ValueError(f"{mode.value} mode needs targets")
    Q, density = _mode_update(mode, Q0, density, agents, targets)
    pts = np.array([a.position for a in agents])
    tree = _tree(pts, agents[0].comm_radius, 0)
    regions = partition(agents, Q, density, safety_radius, segments, resolution)
    return WorldState(0, Q, agents, targets, density, tree, tuple(regions), None, mode)


def run(config) -> List[Tuple[WorldState, MetricsRecord]]:
    """Simulate ``config.max_steps`` steps; returns the state and metrics after each, step 0 included."""
    config.validate()
    agents = config.build_agents()
    world = initial_world(
        agents,
        config.Q0,
        config.mode,
        config.formation,
        config.density,
        config.safety_radius,
        config.disk_segments,
        config.grid_resolution,
    )
    out = [(world, measure(world, config.grid_resolution))]
    for _ in range(config.max_steps):
        world = lloyd_step(
            world,
            config.mode,
            config.safety_radius,
            trajectory=config.formation,
            kinematics=config.kinematics,
            segments=config.disk_segments,
            resolution=config.grid_resolution,
        )
        out.append((world, measure(world, config.grid_resolution)))
    return out
