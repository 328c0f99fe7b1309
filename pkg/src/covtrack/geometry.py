"""Planar geometry on convex polygons.

Every region handled by the simulator (the working area, Voronoi cells,
sensing footprints and their intersections) is a :class:`ConvexPolygon`.
Points are plain ``numpy`` arrays of shape ``(2,)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import EmptyRegion, ZeroMass

# vertices closer than this (meters) are merged
MERGE_TOL = 1e-9
# normalized cross product below which three vertices count as collinear
COLLINEAR_TOL = 1e-10
# polygons with less area (m^2) collapse to the empty polygon
AREA_TOL = 1e-12

DEFAULT_SEGMENTS = 32
DEFAULT_RESOLUTION = 128


def as_point(p) -> np.ndarray:
    q = np.asarray(p, dtype=float).reshape(2)
    if not np.all(np.isfinite(q)):
        raise ValueError(f"non-finite point {p!r}")
    return q


def _cross(a, b):
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]


def _signed_area(v):
    if len(v) < 3:
        return 0.0
    v = v - v[0]
    nxt = np.roll(v, -1, axis=0)
    return 0.5 * float(_cross(v, nxt).sum())


def _normalize(v: np.ndarray) -> np.ndarray:
    # merge repeated vertices (keeping the first copy), then drop collinear
    # ones until every corner is a real turn
    while len(v) >= 2:
        a = v - np.roll(v, 1, axis=0)
        dup = np.hypot(a[:, 0], a[:, 1]) <= MERGE_TOL
        if not dup.any():
            break
        if dup.all():
            return np.empty((0, 2))
        v = v[~dup]
    while len(v) >= 3:
        a = v - np.roll(v, 1, axis=0)
        b = np.roll(v, -1, axis=0) - v
        la = np.hypot(a[:, 0], a[:, 1])
        lb = np.hypot(b[:, 0], b[:, 1])
        bad = np.abs(_cross(a, b)) <= COLLINEAR_TOL * la * lb
        if not bad.any():
            break
        v = v[~bad]
    if len(v) < 3:
        return np.empty((0, 2))
    area = _signed_area(v)
    if abs(area) <= AREA_TOL:
        return np.empty((0, 2))
    if area < 0:
        v = v[::-1]
    a = v - np.roll(v, 1, axis=0)
    b = np.roll(v, -1, axis=0) - v
    if np.any(_cross(a, b) < 0):
        raise ValueError("polygon is not convex")
    return np.ascontiguousarray(v)


class ConvexPolygon:
    """Convex polygon with counter-clockwise vertices.

    Clockwise input is reversed, duplicate and collinear vertices are
    dropped, and anything with (numerically) zero area becomes the empty
    polygon, which has no vertices.
    """

    __slots__ = ("vertices",)

    def __init__(self, vertices=()):
        v = np.asarray(vertices, dtype=float).reshape(-1, 2)
        if not np.all(np.isfinite(v)):
            raise ValueError("polygon vertices must be finite")
        v = _normalize(v)
        v.setflags(write=False)
        self.vertices = v

    @classmethod
    def empty(cls) -> "ConvexPolygon":
        return cls()

    @classmethod
    def rectangle(cls, xmin, xmax, ymin, ymax) -> "ConvexPolygon":
        return cls([(xmin, ymin), (xmax, ymin), (xmax, ymax), (xmin, ymax)])

    @property
    def is_empty(self) -> bool:
        return len(self.vertices) == 0

    def __len__(self):
        return len(self.vertices)

    def __repr__(self):
        if self.is_empty:
            return "ConvexPolygon(<empty>)"
        pts = ", ".join(f"({x:.6g}, {y:.6g})" for x, y in self.vertices)
        return f"ConvexPolygon([{pts}])"

    @property
    def area(self) -> float:
        return _signed_area(self.vertices)

    @property
    def bounds(self):
        """(xmin, xmax, ymin, ymax)."""
        if self.is_empty:
            raise EmptyRegion("empty polygon has no bounds")
        lo = self.vertices.min(axis=0)
        hi = self.vertices.max(axis=0)
        return float(lo[0]), float(hi[0]), float(lo[1]), float(hi[1])

    @property
    def diameter(self) -> float:
        if self.is_empty:
            return 0.0
        d = self.vertices[:, None, :] - self.vertices[None, :, :]
        return float(np.sqrt((d**2).sum(-1)).max())

    def halfplanes(self):
        """Unit normals ``n`` and offsets ``c`` with the polygon = {q : n.q <= c}."""
        v = self.vertices
        e = np.roll(v, -1, axis=0) - v
        n = np.column_stack([e[:, 1], -e[:, 0]])
        n /= np.hypot(n[:, 0], n[:, 1])[:, None]
        return n, (n * v).sum(axis=1)

    def contains(self, points, tol: float = 0.0) -> np.ndarray:
        """Closed containment test, widened by ``tol`` meters."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if self.is_empty:
            return np.zeros(len(pts), dtype=bool)
        n, c = self.halfplanes()
        return np.all(pts @ n.T <= c + tol, axis=1)

    def strictly_contains(self, points, margin: float = 0.0) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if self.is_empty:
            return np.zeros(len(pts), dtype=bool)
        n, c = self.halfplanes()
        return np.all(pts @ n.T < c - margin, axis=1)


def clip_normal(poly: ConvexPolygon, normal, offset: float) -> ConvexPolygon:
    """Keep the part of ``poly`` where ``normal . q <= offset``."""
    if poly.is_empty:
        return poly
    v = poly.vertices
    n = np.asarray(normal, dtype=float)
    d = v @ n - offset
    # tiny overshoots are rounding, not a cut
    eps = 1e-12 * max(1.0, float(np.abs(v).max()))
    if np.all(d <= eps):
        return poly
    if np.all(d >= -eps):
        return ConvexPolygon.empty()
    out = []
    m = len(v)
    for k in range(m):
        dp, dq = d[k], d[(k + 1) % m]
        p = v[k]
        if dp <= 0:
            out.append(p)
        if (dp <= 0) != (dq <= 0):
            q = v[(k + 1) % m]
            out.append(p + (dp / (dp - dq)) * (q - p))
    return ConvexPolygon(out)


def clip_halfplane(poly: ConvexPolygon, start, end) -> ConvexPolygon:
    """Part of ``poly`` on the left of the directed line ``start -> end``."""
    s = as_point(start)
    d = as_point(end) - s
    if not np.any(d):
        raise ValueError("directed line needs two distinct points")
    n = np.array([d[1], -d[0]]) / math.hypot(d[0], d[1])
    return clip_normal(poly, n, float(n @ s))


def intersect_convex(a: ConvexPolygon, b: ConvexPolygon) -> ConvexPolygon:
    if a.is_empty or b.is_empty:
        return ConvexPolygon.empty()
    n, c = b.halfplanes()
    out = a
    for nk, ck in zip(n, c):
        out = clip_normal(out, nk, ck)
        if out.is_empty:
            break
    return out


def convex_hull(points) -> ConvexPolygon:
    """Monotone-chain hull of a point cloud."""
    pts = np.unique(np.asarray(points, dtype=float).reshape(-1, 2), axis=0)
    if len(pts) < 3:
        return ConvexPolygon.empty()

    def half(seq):
        out = []
        for p in seq:
            while len(out) >= 2 and _cross(out[-1] - out[-2], p - out[-2]) <= 0:
                out.pop()
            out.append(p)
        return out[:-1]

    return ConvexPolygon(half(pts) + half(pts[::-1]))


def disk_polygon(center, radius: float, segments: int = DEFAULT_SEGMENTS) -> ConvexPolygon:
    """Regular ``segments``-gon inscribed in the circle of ``radius`` about ``center``."""
    if segments < 8:
        raise ValueError(f"disk approximation needs at least 8 segments, got {segments}")
    if not radius > 0:
        raise ValueError(f"radius must be positive, got {radius}")
    c = as_point(center)
    t = 2.0 * np.pi * np.arange(segments) / segments
    return ConvexPolygon(c + radius * np.column_stack([np.cos(t), np.sin(t)]))


# ---------------------------------------------------------------------------
# density fields


@dataclass(frozen=True)
class Uniform:
    value: float = 1.0

    def __post_init__(self):
        if not (self.value > 0 and math.isfinite(self.value)):
            raise ValueError(f"uniform density must be positive, got {self.value}")

    def __call__(self, points) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        return np.full(len(pts), float(self.value))

    def log_value(self, points) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        return np.full(len(pts), math.log(self.value))


@dataclass(frozen=True, eq=False)
class GaussianMixture:
    """Sum of unit bumps ``exp(-|q - o_k|^2)``, one per center ``o_k``."""

    centers: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.centers, dtype=float).reshape(-1, 2)
        if len(c) == 0:
            raise ValueError("Gaussian mixture needs at least one center")
        if not np.all(np.isfinite(c)):
            raise ValueError("Gaussian centers must be finite")
        c.setflags(write=False)
        object.__setattr__(self, "centers", c)

    def _neg_sq(self, points):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        d = pts[:, None, :] - self.centers[None, :, :]
        return -(d**2).sum(-1)

    def __call__(self, points) -> np.ndarray:
        return np.exp(self._neg_sq(points)).sum(axis=1)

    def log_value(self, points) -> np.ndarray:
        x = self._neg_sq(points)
        m = x.max(axis=1)
        return m + np.log(np.exp(x - m[:, None]).sum(axis=1))


DensityField = Union[Uniform, GaussianMixture]


# ---------------------------------------------------------------------------
# moments


@dataclass(frozen=True, eq=False)
class RegionMoments:
    mass: float
    centroid: np.ndarray
    region: ConvexPolygon


def moments_uniform(poly: ConvexPolygon, density_value: float = 1.0) -> RegionMoments:
    """Closed-form mass and centroid of a polygon under constant density."""
    if poly.is_empty:
        raise EmptyRegion("cannot take moments of an empty region")
    origin = poly.vertices[0]
    v = poly.vertices - origin
    x, y = v[:, 0], v[:, 1]
    x1, y1 = np.roll(x, -1), np.roll(y, -1)
    cr = x * y1 - x1 * y
    area = 0.5 * cr.sum()
    cx = ((x + x1) * cr).sum() / (6.0 * area)
    cy = ((y + y1) * cr).sum() / (6.0 * area)
    return RegionMoments(float(density_value * area), origin + np.array([cx, cy]), poly)


def _uniform_polar(poly: ConvexPolygon, p: np.ndarray) -> float:
    # second moment about p, computed in p-centred coordinates
    v = poly.vertices - p
    x, y = v[:, 0], v[:, 1]
    x1, y1 = np.roll(x, -1), np.roll(y, -1)
    cr = x * y1 - x1 * y
    ixx = (cr * (x * x + x * x1 + x1 * x1)).sum() / 12.0
    iyy = (cr * (y * y + y * y1 + y1 * y1)).sum() / 12.0
    return float(ixx + iyy)


def _box_fraction(t, u, v):
    """Fraction of a u-by-v box (projected widths) lying within distance t of its center.

    The projection of a uniformly distributed point in a cell onto a unit
    normal is the sum of two uniforms with widths ``u`` and ``v``; this is
    its CDF evaluated at ``t``.
    """
    lo = np.maximum(np.minimum(u, v), 1e-15 * np.maximum(u, v))
    hi = np.maximum(u, v)
    w = t + 0.5 * (lo + hi)
    f = np.where(
        w <= lo,
        w * w / (2.0 * lo * hi),
        np.where(w <= hi, (w - 0.5 * lo) / hi, 1.0 - (lo + hi - w) ** 2 / (2.0 * lo * hi)),
    )
    return np.clip(np.where(w <= 0, 0.0, np.where(w >= lo + hi, 1.0, f)), 0.0, 1.0)


def _box_area(center, hx, hy, normals, slack):
    """Area of the cell around ``center`` where ``normal . (q - center) <= slack`` for every line."""
    x, y = 0.5 * hx, 0.5 * hy
    poly = [(-x, -y), (x, -y), (x, y), (-x, y)]
    for (a, b), s in zip(normals.tolist(), slack.tolist()):
        out = []
        m = len(poly)
        for i in range(m):
            px, py = poly[i]
            qx, qy = poly[(i + 1) % m]
            dp = a * px + b * py - s
            dq = a * qx + b * qy - s
            if dp <= 0:
                out.append((px, py))
            if (dp <= 0) != (dq <= 0):
                k = dp / (dp - dq)
                out.append((px + k * (qx - px), py + k * (qy - py)))
        poly = out
        if len(poly) < 3:
            return 0.0
    area = 0.0
    for i in range(len(poly)):
        px, py = poly[i]
        qx, qy = poly[i - 1]
        area += qx * py - px * qy
    return max(0.5 * area, 0.0)


def grid_cells(poly: ConvexPolygon, resolution: int = DEFAULT_RESOLUTION):
    """Midpoint grid over the bounding box of ``poly``.

    Returns cell centers and the area of each cell that lies inside the
    polygon.  Cells cut by one edge get their exact covered area; cells cut
    by several edges (near vertices) are clipped exactly.
    Cells with no coverage are dropped.
    """
    if poly.is_empty:
        raise EmptyRegion("cannot integrate over an empty region")
    if resolution < 16:
        raise ValueError(f"grid resolution must be at least 16, got {resolution}")
    xmin, xmax, ymin, ymax = poly.bounds
    hx = (xmax - xmin) / resolution
    hy = (ymax - ymin) / resolution
    xs = xmin + (np.arange(resolution) + 0.5) * hx
    ys = ymin + (np.arange(resolution) + 0.5) * hy
    gx, gy = np.meshgrid(xs, ys, indexing="xy")
    centers = np.column_stack([gx.ravel(), gy.ravel()])

    n, c = poly.halfplanes()
    t = c[None, :] - centers @ n.T
    u = np.abs(n[:, 0]) * hx
    v = np.abs(n[:, 1]) * hy
    half = 0.5 * (u + v)
    full = np.all(t >= half, axis=1)
    none = np.any(t <= -half, axis=1)
    frac = full.astype(float)
    edge = ~full & ~none
    if edge.any():
        missing = (1.0 - _box_fraction(t[edge], u, v)).sum(axis=1)
        frac[edge] = np.clip(1.0 - missing, 0.0, 1.0)
        # cuts by two or more edges can overlap (near vertices, or along
        # nearly collinear edges); those cells are clipped exactly
        cuts = np.abs(t) < half[None, :]
        for k in np.flatnonzero(edge & (cuts.sum(axis=1) >= 2)):
            js = np.flatnonzero(cuts[k])
            frac[k] = _box_area(centers[k], hx, hy, n[js], t[k, js]) / (hx * hy)
    keep = frac > 0
    return centers[keep], frac[keep] * (hx * hy)


def _grid_integrals(poly, density, resolution, p=None):
    q, w = grid_cells(poly, resolution)
    logphi = density.log_value(q)
    shift = float(logphi.max())
    wt = w * np.exp(logphi - shift)
    rel_mass = wt.sum()
    mass = rel_mass * math.exp(shift) if shift > -745 else 0.0
    if not (mass > 0 and math.isfinite(mass)):
        raise ZeroMass(f"density integrates to {mass:g} over the region")
    centroid = (wt[:, None] * q).sum(axis=0) / rel_mass
    polar = None
    if p is not None:
        d = q - p
        polar = float((wt * (d**2).sum(axis=1)).sum() * math.exp(shift))
    return float(mass), centroid, polar


def moments_numeric(
    poly: ConvexPolygon, density: DensityField, resolution: int = DEFAULT_RESOLUTION
) -> RegionMoments:
    """Grid-quadrature mass and centroid under an arbitrary density."""
    mass, centroid, _ = _grid_integrals(poly, density, resolution)
    return RegionMoments(mass, centroid, poly)


def region_moments(poly: ConvexPolygon, density: DensityField, resolution: int = DEFAULT_RESOLUTION):
    """Closed form for uniform density, quadrature otherwise."""
    if isinstance(density, Uniform):
        return moments_uniform(poly, density.value)
    return moments_numeric(poly, density, resolution)


def polar_moment(
    poly: ConvexPolygon, p, density: DensityField, resolution: int = DEFAULT_RESOLUTION
) -> float:
    """Integral of ``|q - p|^2 phi(q)`` over the polygon.

    Exact for uniform density; grid quadrature for anything else.
    """
    if poly.is_empty:
        raise EmptyRegion("cannot take moments of an empty region")
    p = as_point(p)
    if isinstance(density, Uniform):
        return density.value * _uniform_polar(poly, p)
    return _grid_integrals(poly, density, resolution, p=p)[2]
