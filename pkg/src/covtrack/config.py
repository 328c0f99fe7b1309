"""Scenario and sweep descriptions, loaded from YAML."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, List, Optional, Tuple

import numpy as np
import yaml

from .connectivity import components
from .engine import Integrator, Kinematics, Mode, Unicycle
from .errors import ParseError, ValidationError
from .geometry import DEFAULT_RESOLUTION, DEFAULT_SEGMENTS, ConvexPolygon, DensityField, GaussianMixture, Uniform
from .partition import MIN_SEPARATION, AgentState
from .tracking import Arc, FormationTrajectory, GridLayout, Line, Scripted, Static

log = logging.getLogger(__name__)

# slack for "agent inside the working area" (meters)
INSIDE_TOL = 1e-9


@dataclass(frozen=True)
class AgentGrid:
    rows: int
    cols: int
    spacing: float
    center: Tuple[float, float]

    def positions(self) -> np.ndarray:
        return GridLayout(self.rows, self.cols, self.spacing, self.center).positions()


@dataclass(frozen=True, eq=False)
class ScenarioConfig:
    name: str
    Q0: ConvexPolygon
    agents_init: tuple  # ((x, y), s, r) per agent
    formation: Optional[FormationTrajectory] = None
    mode: Mode = Mode.BOUNDARY
    kinematics: Kinematics = Integrator()
    safety_radius: float = 0.0
    max_steps: int = 60
    disk_segments: int = DEFAULT_SEGMENTS
    grid_resolution: int = DEFAULT_RESOLUTION
    density: DensityField = Uniform(1.0)
    agent_grid: Optional[AgentGrid] = None  # kept so agent-count sweeps can regrow the layout

    @property
    def sensing_radius(self) -> float:
        return self.agents_init[0][1]

    @property
    def comm_radius(self) -> float:
        return self.agents_init[0][2]

    def build_agents(self) -> Tuple[AgentState, ...]:
        return tuple(AgentState(i, p, s, r) for i, (p, s, r) in enumerate(self.agents_init))

    def problems(self) -> List[str]:
        out = []
        if self.max_steps < 1:
            out.append(f"max_steps: must be at least 1, got {self.max_steps}")
        if self.disk_segments < 8:
            out.append(f"disk_segments: must be at least 8, got {self.disk_segments}")
        if self.grid_resolution < 16:
            out.append(f"grid_resolution: must be at least 16, got {self.grid_resolution}")
        if self.safety_radius < 0:
            out.append("safety_radius: must be non-negative")
        if self.Q0.is_empty:
            out.append("working_area: polygon is empty")
        if self.mode is not Mode.STATIC and self.formation is None:
            out.append(f"formation: required in {self.mode.value} mode")
        if not self.agents_init:
            out.append("agents: at least one agent is required")
            return out
        radii = {(s, r) for _, s, r in self.agents_init}
        if len(radii) > 1:
            out.append("agents: all agents must share one sensing and one communication radius")
        s, r = self.sensing_radius, self.comm_radius
        if not s > 0:
            out.append(f"agents.sensing_radius: must be positive, got {s}")
        if not r > 0:
            out.append(f"agents.comm_radius: must be positive, got {r}")
            return out
        pts = np.array([p for p, _, _ in self.agents_init], dtype=float)
        if not self.Q0.is_empty:
            inside = self.Q0.contains(pts, tol=INSIDE_TOL)
            for i in np.flatnonzero(~inside):
                out.append(f"agents.positions[{i}]: agent {i} at {tuple(pts[i])} is outside the working area")
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                if math.dist(pts[i], pts[j]) < MIN_SEPARATION:
                    out.append(f"agents.positions[{j}]: agent {j} coincides with agent {i}")
        comps = components(pts, r)
        if len(comps) > 1:
            listed = " | ".join(str(c) for c in comps)
            out.append(f"agents.positions: initial communication graph is disconnected: {listed}")
        return out

    def validate(self) -> "ScenarioConfig":
        problems = self.problems()
        if problems:
            raise ValidationError(problems)
        if self.comm_radius < 2 * self.sensing_radius:
            log.warning(
                "%s: comm radius %.3g < 2 x sensing radius %.3g; a distributed run would need r >= 2s",
                self.name,
                self.comm_radius,
                self.sensing_radius,
            )
        return self


# ---------------------------------------------------------------------------
# YAML parsing


class _Reader:
    """Pulls typed values out of nested mappings, collecting every problem."""

    def __init__(self):
        self.problems: List[str] = []

    def get(self, data, key, path, kind, default=...):
        where = f"{path}.{key}" if path else key
        if not isinstance(data, dict) or key not in data:
            if default is ...:
                self.problems.append(f"{where}: missing")
            return None if default is ... else default
        value = data[key]
        try:
            return kind(value)
        except (TypeError, ValueError) as exc:
            self.problems.append(f"{where}: {exc}")
            return None if default is ... else default


def _point(v):
    a = np.asarray(v, dtype=float)
    if a.shape != (2,):
        raise ValueError(f"expected [x, y], got {v!r}")
    return float(a[0]), float(a[1])


def _points(v):
    a = np.asarray(v, dtype=float)
    if a.ndim != 2 or a.shape[1] != 2:
        raise ValueError(f"expected a list of [x, y] pairs, got {v!r}")
    return a


def _polygon(v):
    if isinstance(v, dict) and "rect" in v:
        xmin, xmax, ymin, ymax = (float(x) for x in v["rect"])
        if not (xmin < xmax and ymin < ymax):
            raise ValueError("rect must be [xmin, xmax, ymin, ymax] with positive extent")
        return ConvexPolygon.rectangle(xmin, xmax, ymin, ymax)
    if isinstance(v, dict) and "vertices" in v:
        return ConvexPolygon(_points(v["vertices"]))
    raise ValueError("give either rect: [xmin, xmax, ymin, ymax] or vertices: [[x, y], ...]")


def _mapping(v):
    if not isinstance(v, dict):
        raise ValueError(f"expected a mapping, got {type(v).__name__}")
    return v


def _path(rd: _Reader, data, where):
    kind = rd.get(data, "kind", where, str, "static")
    if kind == "static":
        return Static()
    if kind == "line":
        return Line(rd.get(data, "direction", where, _point, (1.0, 0.0)), rd.get(data, "speed", where, float))
    if kind == "arc":
        return Arc(
            rd.get(data, "center", where, _point),
            rd.get(data, "speed", where, float),
            rd.get(data, "clockwise", where, bool, False),
        )
    if kind == "scripted":
        wps = rd.get(data, "waypoints", where, list)
        return Scripted(tuple(tuple(map(tuple, _points(w))) for w in wps))
    rd.problems.append(f"{where}.kind: unknown path kind {kind!r}")
    return None


def _formation(rd: _Reader, data):
    if data is None:
        return None
    w = "formation"
    try:
        layout = GridLayout(
            rd.get(data, "rows", w, int),
            rd.get(data, "cols", w, int),
            rd.get(data, "spacing", w, float),
            rd.get(data, "center", w, _point, (0.0, 0.0)),
        )
        path = _path(rd, rd.get(data, "path", w, _mapping, {}), f"{w}.path")
        return FormationTrajectory(layout, path)
    except (TypeError, ValueError) as exc:
        rd.problems.append(f"{w}: {exc}")
        return None


def _kinematics(rd: _Reader, data):
    kind = rd.get(data, "kind", "kinematics", str, "integrator")
    if kind == "integrator":
        return Integrator()
    if kind == "unicycle":
        try:
            return Unicycle(
                rd.get(data, "max_linear", "kinematics", float),
                rd.get(data, "max_angular", "kinematics", float),
                rd.get(data, "tolerance", "kinematics", float, 0.065),
                rd.get(data, "max_micro_steps", "kinematics", int, 10_000),
            )
        except (TypeError, ValueError) as exc:
            rd.problems.append(f"kinematics: {exc}")
            return Integrator()
    rd.problems.append(f"kinematics.kind: unknown kinematics {kind!r}")
    return Integrator()


def _density(rd: _Reader, data):
    kind = rd.get(data, "kind", "density", str, "uniform")
    try:
        if kind == "uniform":
            return Uniform(rd.get(data, "value", "density", float, 1.0))
        if kind == "gaussian":
            return GaussianMixture(rd.get(data, "centers", "density", _points))
    except (TypeError, ValueError) as exc:
        rd.problems.append(f"density: {exc}")
        return Uniform(1.0)
    rd.problems.append(f"density.kind: unknown density {kind!r}")
    return Uniform(1.0)


def config_from_dict(data: Any, name: str = "scenario") -> ScenarioConfig:
    if not isinstance(data, dict):
        raise ParseError("scenario file must contain a mapping at the top level")
    rd = _Reader()
    mode = rd.get(data, "mode", "", Mode, Mode.BOUNDARY)
    Q0 = rd.get(data, "working_area", "", _polygon)
    ag = rd.get(data, "agents", "", _mapping, {})
    s = rd.get(ag, "sensing_radius", "agents", float)
    r = rd.get(ag, "comm_radius", "agents", float)
    grid = None
    if "grid" in ag:
        g = rd.get(ag, "grid", "agents", _mapping, {})
        grid = AgentGrid(
            rd.get(g, "rows", "agents.grid", int, 1),
            rd.get(g, "cols", "agents.grid", int, 1),
            rd.get(g, "spacing", "agents.grid", float, 1.0),
            rd.get(g, "center", "agents.grid", _point, (0.0, 0.0)),
        )
        positions = grid.positions()
    else:
        positions = rd.get(ag, "positions", "agents", _points, np.empty((0, 2)))
    cfg = None
    if not rd.problems:
        cfg = ScenarioConfig(
            name=str(data.get("name", name)),
            Q0=Q0,
            agents_init=tuple((tuple(p), s, r) for p in positions),
            formation=_formation(rd, data.get("formation")),
            mode=mode,
            kinematics=_kinematics(rd, data.get("kinematics", {})),
            safety_radius=rd.get(data, "safety_radius", "", float, 0.0),
            max_steps=rd.get(data, "max_steps", "", int, 60),
            disk_segments=rd.get(data, "disk_segments", "", int, DEFAULT_SEGMENTS),
            grid_resolution=rd.get(data, "grid_resolution", "", int, DEFAULT_RESOLUTION),
            density=_density(rd, data.get("density", {})),
            agent_grid=grid,
        )
    if rd.problems:
        raise ValidationError(rd.problems)
    return cfg.validate()


def _read_yaml(path):
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    try:
        return yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ParseError(f"{path}: {exc}") from exc


def load_config(path) -> ScenarioConfig:
    """Read and validate a scenario file."""
    return config_from_dict(_read_yaml(path), name=Path(path).stem)


# ---------------------------------------------------------------------------
# sweeps

AXES = ("velocity", "sensing_radius", "comm_radius", "agent_count", "mode", "max_steps")


def _grid_shape(n):
    rows = max(d for d in range(1, int(math.isqrt(n)) + 1) if n % d == 0)
    return rows, n // rows


def apply_axis(cfg: ScenarioConfig, axis: str, value) -> ScenarioConfig:
    """Copy of ``cfg`` with one sweep parameter changed.

    ``sensing_radius`` keeps ``r = 2 s``.  ``agent_count`` regrows the agent
    grid around the same center with the same spacing, as close to square as
    the count allows.
    """
    if axis == "velocity":
        path = cfg.formation.path if cfg.formation else None
        if not isinstance(path, (Line, Arc)):
            raise ValueError("velocity sweep needs a line or arc formation path")
        return replace(cfg, formation=replace(cfg.formation, path=replace(path, speed=float(value))))
    if axis == "sensing_radius":
        s = float(value)
        return replace(cfg, agents_init=tuple((p, s, 2.0 * s) for p, _, _ in cfg.agents_init))
    if axis == "comm_radius":
        r = float(value)
        return replace(cfg, agents_init=tuple((p, s, r) for p, s, _ in cfg.agents_init))
    if axis == "agent_count":
        n = int(value)
        if n < 1:
            raise ValueError("agent count must be positive")
        if cfg.agent_grid is not None:
            spacing, center = cfg.agent_grid.spacing, cfg.agent_grid.center
        else:
            spacing = 1.0
            center = tuple(np.mean([p for p, _, _ in cfg.agents_init], axis=0))
        rows, cols = _grid_shape(n)
        grid = AgentGrid(rows, cols, spacing, center)
        s, r = cfg.sensing_radius, cfg.comm_radius
        return replace(cfg, agents_init=tuple((tuple(p), s, r) for p in grid.positions()), agent_grid=grid)
    if axis == "mode":
        return replace(cfg, mode=Mode(value))
    if axis == "max_steps":
        return replace(cfg, max_steps=int(value))
    raise ValueError(f"unknown sweep axis {axis!r}")


@dataclass(frozen=True, eq=False)
class SweepSpec:
    name: str
    base: ScenarioConfig
    axis: str
    values: tuple
    overrides: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.axis not in AXES:
            raise ValueError(f"unknown sweep axis {self.axis!r}")
        if len(self.values) == 0:
            raise ValueError("sweep needs at least one value")

    def configs(self):
        """``(value, config)`` for every sweep point, overrides applied first."""
        cfg = self.base
        for key, val in self.overrides.items():
            cfg = apply_axis(cfg, key, val)
        for v in self.values:
            c = apply_axis(cfg, self.axis, v)
            yield v, replace(c, name=f"{self.name}_{self.axis}_{v}")


def load_sweep(path) -> SweepSpec:
    path = Path(path)
    data = _read_yaml(path)
    if not isinstance(data, dict):
        raise ParseError(f"{path}: sweep file must contain a mapping")
    rd = _Reader()
    base_ref = rd.get(data, "base", "", str)
    axis = rd.get(data, "axis", "", str)
    values = rd.get(data, "values", "", list)
    overrides = rd.get(data, "overrides", "", _mapping, {})
    if axis is not None and axis not in AXES:
        rd.problems.append(f"axis: must be one of {', '.join(AXES)}, got {axis!r}")
    if values is not None and not values:
        rd.problems.append("values: must not be empty")
    for key in overrides or {}:
        if key not in AXES:
            rd.problems.append(f"overrides.{key}: not a sweepable field")
    if rd.problems:
        raise ValidationError(rd.problems)
    base = load_config(path.parent / base_ref)
    spec = SweepSpec(str(data.get("name", path.stem)), base, axis, tuple(values), dict(overrides))
    problems = []
    for v, cfg in spec.configs():
        problems += [f"values[{v!r}] -> {p}" for p in cfg.problems()]
    if problems:
        raise ValidationError(problems)
    return spec
