"""Metric CSVs, the steady-state detector, and parametric sweeps."""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np

from .config import SweepSpec
from .errors import ConfigError, DisconnectedGraph, EmptyRegion, NonConvergence, ZeroMass
from .engine import run
from .metrics import MetricsRecord
from .snapshot import render_panels

log = logging.getLogger(__name__)

STEADY_WINDOW = 10
STEADY_BAND = 0.05

_INT_COLUMNS = {"step", "covered_targets"}


def write_metrics_csv(records: Sequence[MetricsRecord], path) -> Path:
    """One row per step; floats are written with ``repr`` so they read back exactly."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(MetricsRecord.columns())
        for rec in records:
            w.writerow([repr(v) if isinstance(v, float) else v for v in rec.row()])
    return path


def read_metrics_csv(path) -> List[MetricsRecord]:
    with Path(path).open(newline="") as fh:
        rows = list(csv.DictReader(fh))
    if rows and list(rows[0].keys()) != MetricsRecord.columns():
        raise ValueError(f"{path}: unexpected columns {list(rows[0].keys())}")
    return [
        MetricsRecord(**{k: int(v) if k in _INT_COLUMNS else float(v) for k, v in row.items()})
        for row in rows
    ]


@dataclass(frozen=True)
class SteadyState:
    value: float  # mean over the window
    spread: float  # max - min over the window
    converged: bool


def steady_state(series, window: int = STEADY_WINDOW, band: float = STEADY_BAND) -> SteadyState:
    """Mean of the last ``window`` values; converged if their range is below ``band`` of the mean."""
    x = np.asarray(series, dtype=float)
    if len(x) == 0:
        raise ValueError("empty series")
    tail = x[-window:]
    mean = float(tail.mean())
    spread = float(tail.max() - tail.min())
    converged = len(x) >= window and spread < band * abs(mean)
    return SteadyState(mean, spread, bool(converged))


SUMMARY_COLUMNS = [
    "value",
    "status",
    "steps",
    "steady_sum_dist",
    "steady_mean_dist",
    "sum_dist_spread",
    "converged",
    "final_cost_full",
    "min_tree_slack",
    "error",
]


@dataclass
class SweepPoint:
    value: object
    records: List[MetricsRecord]
    error: Optional[str] = None

    def summary_row(self):
        if not self.records:
            return [self.value, "failed", 0, "", "", "", False, "", "", self.error or ""]
        sd = steady_state([r.sum_dist for r in self.records])
        md = steady_state([r.mean_dist for r in self.records])
        last = self.records[-1]
        return [
            self.value,
            "failed" if self.error else "ok",
            last.step,
            repr(sd.value) if sd.converged else "",
            repr(md.value) if md.converged else "",
            repr(sd.spread),
            sd.converged,
            repr(last.cost_full),
            repr(min(r.min_tree_slack for r in self.records)),
            self.error or "",
        ]


def _slug(v):
    return str(v).replace(".", "p").replace("-", "m")


def run_sweep(spec: SweepSpec, out_dir, snapshots: bool = True) -> List[SweepPoint]:
    """Run every sweep point, writing per-value metrics, a summary and snapshots.

    A failing point is recorded in the summary and the sweep moves on.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    points = []
    for value, cfg in spec.configs():
        tag = f"{spec.axis}_{_slug(value)}"
        try:
            history = run(cfg)
        except (DisconnectedGraph, NonConvergence, EmptyRegion, ZeroMass, ConfigError) as exc:
            step = getattr(exc, "step", None)
            where = f" at step {step}" if step is not None else ""
            log.error("%s = %s failed%s: %s", spec.axis, value, where, exc)
            text = "; ".join(line.strip() for line in str(exc).splitlines() if line.strip())
            points.append(SweepPoint(value, [], f"{type(exc).__name__}{where}: {text}"))
            continue
        records = [rec for _, rec in history]
        write_metrics_csv(records, out / f"{tag}.csv")
        if snapshots:
            first, last = history[0][0], history[-1][0]
            svg = render_panels([first, last], [f"{spec.axis} = {value}, step 0", f"step {last.step}"])
            (out / f"{tag}.svg").write_text(svg)
        points.append(SweepPoint(value, records))
        log.info("%s = %s: %d steps", spec.axis, value, len(records) - 1)
    with (out / "summary.csv").open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SUMMARY_COLUMNS)
        for p in points:
            w.writerow(p.summary_row())
    return points
