"""Minimum-distance spanning tree and the link-preserving motion limits."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np

from .errors import DisconnectedGraph
from .geometry import as_point

# constraint circles are shrunk by this relative amount so that rounding
# in the goal computation can never push a preserved link past r
RADIUS_MARGIN = 1e-12


@dataclass(frozen=True)
class SpanningTree:
    n: int
    edges: tuple  # (source, candidate, length) in insertion order

    @property
    def total_weight(self) -> float:
        return math.fsum(w for _, _, w in self.edges)

    def degree(self, i: int) -> int:
        return sum(1 for a, b, _ in self.edges if i in (a, b))

    def longest_edge(self, positions=None) -> float:
        """Longest link, at the stored lengths or re-measured at ``positions``."""
        if not self.edges:
            return 0.0
        if positions is None:
            return max(w for _, _, w in self.edges)
        pts = np.asarray(positions, dtype=float)
        return max(float(np.hypot(*(pts[a] - pts[b]))) for a, b, _ in self.edges)


@dataclass(frozen=True, eq=False)
class MotionConstraint:
    center: np.ndarray
    radius: float


def _distances(pts):
    d = pts[:, None, :] - pts[None, :, :]
    return np.sqrt((d**2).sum(-1))


def compute_mst(positions, r: float) -> SpanningTree:
    """Prim growth from agent 0 over links no longer than ``r``.

    Each round adds the shortest link from a tree node to a non-tree node.
    Equal lengths go to the smallest (source, candidate) pair so the result
    is reproducible bit for bit.
    """
    pts = np.asarray(positions, dtype=float).reshape(-1, 2)
    n = len(pts)
    if n == 0:
        raise ValueError("need at least one agent")
    dist = _distances(pts)
    reachable = dist <= r
    in_tree = np.zeros(n, dtype=bool)
    in_tree[0] = True
    edges = []
    while len(edges) < n - 1:
        cand = reachable & in_tree[:, None] & ~in_tree[None, :]
        if not cand.any():
            tree = np.flatnonzero(in_tree).tolist()
            rest = np.flatnonzero(~in_tree).tolist()
            raise DisconnectedGraph([tree, rest])
        masked = np.where(cand, dist, np.inf)
        best = masked.min()
        # argwhere walks row-major, i.e. in (source, candidate) order
        i, j = np.argwhere(masked == best)[0]
        edges.append((int(i), int(j), float(best)))
        in_tree[j] = True
    return SpanningTree(n, tuple(edges))


def components(positions, r: float) -> List[List[int]]:
    """Connected components of the r-disk graph, each sorted, ordered by first node."""
    pts = np.asarray(positions, dtype=float).reshape(-1, 2)
    n = len(pts)
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    adj = _distances(pts) <= r
    for i in range(n):
        for j in range(i + 1, n):
            if adj[i, j]:
                parent[find(i)] = find(j)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values(), key=lambda g: g[0])


def is_connected(positions, r: float) -> bool:
    return len(components(positions, r)) == 1


def motion_constraints(tree: SpanningTree, positions, r: float) -> List[List[MotionConstraint]]:
    """For each tree link, both endpoints must stay within r/2 of the link midpoint."""
    pts = np.asarray(positions, dtype=float).reshape(-1, 2)
    out: List[List[MotionConstraint]] = [[] for _ in range(len(pts))]
    for i, j, _ in tree.edges:
        c = MotionConstraint(0.5 * (pts[i] + pts[j]), 0.5 * r)
        out[i].append(c)
        out[j].append(c)
    return out


def limit_gain(current, goal, constraints: Sequence[MotionConstraint]) -> float:
    """Largest K in [0, 1] keeping ``current + K (goal - current)`` inside every circle."""
    p = as_point(current)
    d = as_point(goal) - p
    a = float(d @ d)
    if a == 0.0:
        return 1.0
    k = 1.0
    for c in constraints:
        rad = c.radius * (1.0 - RADIUS_MARGIN)
        w = p - c.center
        b = float(d @ w)
        c0 = float(w @ w) - rad * rad
        # the segment leaves the circle at the larger root of a K^2 + 2 b K + c0
        sq = math.sqrt(max(b * b - a * c0, 0.0))
        root = (sq - b) / a if b <= 0 else -c0 / (b + sq)
        k = min(k, root)
    return min(max(k, 0.0), 1.0)


def limit_goal(current, goal, constraints: Sequence[MotionConstraint]) -> np.ndarray:
    p = as_point(current)
    k = limit_gain(p, goal, constraints)
    if k == 1.0:
        return as_point(goal)
    return p + k * (as_point(goal) - p)
