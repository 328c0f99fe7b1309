"""Oracle checks run by ``covtrack verify``.

Each check draws random instances from a seeded generator and compares the
production code against an independent computation: brute-force spanning
tree enumeration, the reduced-sensing cost bound, and closed-form polygon
moments against grid quadrature.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, List

import numpy as np

from .connectivity import compute_mst
from .errors import DisconnectedGraph
from .geometry import ConvexPolygon, GaussianMixture, Uniform, convex_hull, moments_numeric, moments_uniform
from .metrics import verify_comm_bound


@dataclass
class Check:
    name: str
    trials: int
    failures: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.name}: {self.trials - len(self.failures)}/{self.trials} trials"


def _edge_length(a, b) -> float:
    # same arithmetic as the production distance matrix, so weights compare exactly
    d = np.asarray(a, dtype=float) - np.asarray(b, dtype=float)
    return float(np.sqrt((d**2).sum()))


def _pruefer_edges(seq, n):
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    edges = []
    for x in seq:
        leaf = min(i for i in range(n) if degree[i] == 1)
        edges.append((leaf, x))
        degree[leaf] -= 1
        degree[x] -= 1
    u, v = [i for i in range(n) if degree[i] == 1]
    edges.append((u, v))
    return edges


def brute_force_mst_weight(positions, r: float):
    """Minimum total length over every labelled tree whose links are all <= r.

    Enumerates the n^(n-2) Pruefer sequences; None if no such tree exists.
    """
    pts = np.asarray(positions, dtype=float)
    n = len(pts)
    if n == 1:
        return 0.0
    length = {(i, j): _edge_length(pts[i], pts[j]) for i in range(n) for j in range(i + 1, n)}
    best = None
    for seq in itertools.product(range(n), repeat=n - 2):
        ws = []
        for a, b in _pruefer_edges(seq, n):
            w = length[min(a, b), max(a, b)]
            if w > r:
                break
            ws.append(w)
        else:
            total = math.fsum(ws)
            if best is None or total < best:
                best = total
    return best


def check_mst(trials: int = 200, seed: int = 0) -> Check:
    rng = np.random.default_rng(seed)
    chk = Check("MST matches brute-force enumeration", trials)
    for t in range(trials):
        n = int(rng.integers(3, 8))
        pts = rng.uniform(0.0, 10.0, size=(n, 2))
        r = float(rng.uniform(3.0, 12.0))
        expect = brute_force_mst_weight(pts, r)
        try:
            got = compute_mst(pts, r).total_weight
        except DisconnectedGraph:
            got = None
        if got != expect:
            chk.failures.append(f"trial {t}: n={n} r={r:.3f} mst={got} brute={expect}")
    return chk


def random_convex_polygon(rng, k_min: int = 3, k_max: int = 12, scale: float = 10.0) -> ConvexPolygon:
    while True:
        k = int(rng.integers(k_min, k_max + 1))
        poly = convex_hull(rng.uniform(0.0, scale, size=(k, 2)))
        if not poly.is_empty and poly.area > 0.05 * scale * scale:
            return poly


def sample_inside(rng, poly: ConvexPolygon, count: int) -> np.ndarray:
    xmin, xmax, ymin, ymax = poly.bounds
    out = np.empty((0, 2))
    while len(out) < count:
        cand = rng.uniform((xmin, ymin), (xmax, ymax), size=(4 * count, 2))
        out = np.vstack([out, cand[poly.strictly_contains(cand)]])
    return out[:count]


def check_comm_bound(trials: int = 100, seed: int = 1, resolution: int = 128) -> Check:
    rng = np.random.default_rng(seed)
    chk = Check("reduced-sensing bound beta*H_s >= H_s* >= H_s > 0", trials)
    for t in range(trials):
        Q = random_convex_polygon(rng)
        n = int(rng.integers(2, 9))
        pts = sample_inside(rng, Q, n)
        s = float(rng.uniform(0.5, 3.0))
        if rng.random() < 0.5:
            density = Uniform(float(rng.uniform(0.5, 2.0)))
        else:
            density = GaussianMixture(sample_inside(rng, Q, int(rng.integers(1, 5))))
        res = verify_comm_bound(pts, density, Q, s, 2.0 * s, resolution)
        if not res.holds:
            chk.failures.append(f"trial {t}: H_s={res.h_s:.6g} H_s*={res.h_s_star:.6g} beta={res.beta}")
    return chk


def check_centroids(trials: int = 100, seed: int = 2, resolution: int = 256) -> Check:
    rng = np.random.default_rng(seed)
    chk = Check("grid moments agree with closed-form polygon moments", trials)
    for t in range(trials):
        poly = random_convex_polygon(rng)
        exact = moments_uniform(poly)
        grid = moments_numeric(poly, Uniform(1.0), resolution)
        dc = float(np.hypot(*(grid.centroid - exact.centroid)))
        dm = abs(grid.mass - exact.mass) / exact.mass
        if dc > 1e-3 * poly.diameter or dm > 1e-3:
            chk.failures.append(f"trial {t}: centroid off by {dc:.3g}, mass rel error {dm:.3g}")
    return chk


CHECKS: List[Callable[[], Check]] = [check_mst, check_comm_bound, check_centroids]


def run_all() -> List[Check]:
    return [c() for c in CHECKS]
