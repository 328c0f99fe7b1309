"""Coverage-based multi-agent target tracking.

Agents run a sensing-limited Lloyd iteration over a moving target formation,
either reshaping the working area around agents and targets (boundary mode)
or weighting it with Gaussian bumps on the targets (importance mode), while
a minimum spanning tree keeps the communication graph connected.
"""

from .config import ScenarioConfig, SweepSpec, apply_axis, config_from_dict, load_config, load_sweep
from .connectivity import SpanningTree, compute_mst, limit_goal, motion_constraints
from .engine import Integrator, Mode, Unicycle, WorldState, initial_world, lloyd_step, run, unicycle_navigate
from .errors import (
    ConfigError,
    DisconnectedGraph,
    DuplicatePosition,
    EmptyRegion,
    NonConvergence,
    ParseError,
    ValidationError,
    ZeroMass,
)
from .geometry import ConvexPolygon, GaussianMixture, Uniform, moments_numeric, moments_uniform, polar_moment
from .metrics import MetricsRecord, cost_limited, covered_targets, sum_distance, verify_comm_bound
from .partition import AgentState, CoverageRegion, cao_cell, coverage_region, partition
from .snapshot import emit_snapshot
from .sweep import read_metrics_csv, run_sweep, steady_state, write_metrics_csv
from .tracking import FormationTrajectory, GridLayout, TargetState, advance_targets, redefine_boundary, update_density

__version__ = "0.1.0"
