"""Command-line entry point: ``covtrack run | sweep | verify``."""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path

from .config import load_config, load_sweep
from .errors import ConfigError, DisconnectedGraph, NonConvergence
from .engine import run
from .snapshot import emit_snapshot
from .sweep import run_sweep, steady_state, write_metrics_csv

log = logging.getLogger("covtrack")


def _overrides(cfg, args):
    if args.segments is not None:
        cfg = replace(cfg, disk_segments=args.segments)
    if args.grid is not None:
        cfg = replace(cfg, grid_resolution=args.grid)
    return cfg


def cmd_run(args) -> int:
    cfg = _overrides(load_config(args.config), args)
    out = Path(args.out)
    try:
        history = run(cfg)
    except (DisconnectedGraph, NonConvergence) as exc:
        print(f"{type(exc).__name__} (step {exc.step}): {exc}", file=sys.stderr)
        return 2
    records = [rec for _, rec in history]
    path = write_metrics_csv(records, out / f"{cfg.name}.csv")
    if args.snapshots:
        for world, _ in history:
            if world.step % args.snapshots == 0 or world.step == cfg.max_steps:
                emit_snapshot(world, out / f"{cfg.name}_step{world.step:04d}.svg")
    st = steady_state([r.sum_dist for r in records])
    flag = "steady" if st.converged else "not converged"
    print(f"{cfg.name}: {cfg.max_steps} steps -> {path}")
    print(f"  final sum_dist {records[-1].sum_dist:.4f}, last-10 mean {st.value:.4f} ({flag})")
    print(f"  min tree slack {min(r.min_tree_slack for r in records):.4f} m")
    return 0


def cmd_sweep(args) -> int:
    spec = load_sweep(args.spec)
    if args.segments is not None or args.grid is not None:
        spec = replace(spec, base=_overrides(spec.base, args))
    out = Path(args.out) / spec.name
    points = run_sweep(spec, out)
    print(f"{spec.name}: {spec.axis} over {list(spec.values)} -> {out}")
    for p in points:
        if p.error:
            print(f"  {spec.axis}={p.value}: FAILED {p.error}")
            continue
        st = steady_state([r.sum_dist for r in p.records])
        flag = "" if st.converged else "  (not converged)"
        print(f"  {spec.axis}={p.value}: steady sum_dist {st.value:.4f}{flag}")
    return 1 if any(p.error for p in points) else 0


def cmd_verify(args) -> int:
    from .verify import run_all

    checks = run_all()
    for c in checks:
        print(c.line())
        for f in c.failures[:5]:
            print(f"    {f}")
    return 0 if all(c.passed for c in checks) else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="covtrack", description="Coverage-based target tracking simulator")
    ap.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = ap.add_subparsers(dest="command", required=True)

    def numerics(p):
        p.add_argument("--segments", type=int, help="polygon sides per sensing disk")
        p.add_argument("--grid", type=int, help="quadrature cells per axis")

    p = sub.add_parser("run", help="simulate one scenario file")
    p.add_argument("config")
    p.add_argument("--out", default="out")
    p.add_argument("--snapshots", type=int, metavar="K", help="write an SVG every K steps")
    numerics(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="run a parametric sweep file")
    p.add_argument("spec")
    p.add_argument("--out", default="out")
    numerics(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="run the oracle checks")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
