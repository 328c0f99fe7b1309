import math

import numpy as np
import pytest
from scipy.spatial import Voronoi

from covtrack.errors import DuplicatePosition, EmptyRegion
from covtrack.geometry import ConvexPolygon, GaussianMixture, Uniform, disk_polygon
from covtrack.partition import AgentState, cao_cell, coverage_region, partition, voronoi_cell
from covtrack.verify import random_convex_polygon, sample_inside


def agents_at(points, s=100.0, r=100.0):
    return [AgentState(i, p, s, r) for i, p in enumerate(np.asarray(points, dtype=float))]


def scipy_neighbors(points, i):
    vor = Voronoi(points)
    return sorted({b if a == i else a for a, b in vor.ridge_points.tolist() if i in (a, b)})


def test_two_agents_split_at_bisector():
    Q = ConvexPolygon.rectangle(-1, 3, -1, 1)
    cell = voronoi_cell(0, [(0, 0), (2, 0)], Q)
    assert cell.area == pytest.approx(4.0)
    assert np.allclose(sorted(cell.vertices[:, 0]), [-1, -1, 1, 1])


def test_single_agent_owns_q():
    Q = ConvexPolygon.rectangle(0, 4, 0, 2)
    assert voronoi_cell(0, [(1, 1)], Q) is Q


def test_neighbor_example():
    # p1 at the origin surrounded by four Voronoi neighbours; p4 and p7 sit
    # behind them and never contribute an edge
    pts = np.array(
        [
            (0.0, 0.0),  # p1
            (2.0, 0.3),  # p2
            (0.2, 2.1),  # p3
            (3.6, 3.4),  # p4
            (-2.0, 0.1),  # p5
            (0.1, -2.2),  # p6
            (-3.8, -3.5),  # p7
        ]
    )
    Q = ConvexPolygon.rectangle(-10, 10, -10, 10)
    res = cao_cell(0, pts, Q)
    assert res.neighbors == [1, 2, 4, 5]
    assert res.neighbors == scipy_neighbors(pts, 0)


def test_neighbors_match_scipy_voronoi():
    rng = np.random.default_rng(5)
    # large enough that no Voronoi ridge of the cloud is cut away by Q
    Q = ConvexPolygon.rectangle(-1e5, 1e5, -1e5, 1e5)
    for _ in range(30):
        pts = rng.uniform(-5, 5, size=(int(rng.integers(4, 15)), 2))
        for i in range(len(pts)):
            assert cao_cell(i, pts, Q).neighbors == scipy_neighbors(pts, i)


def test_cao_examines_at_most_n_minus_one_and_keeps_order():
    rng = np.random.default_rng(9)
    Q = ConvexPolygon.rectangle(0, 10, 0, 10)
    pts = rng.uniform(0, 10, size=(25, 2))
    for i in range(len(pts)):
        res = cao_cell(i, pts, Q)
        assert len(res.examined) <= len(pts) - 1
        d = [math.dist(pts[i], pts[j]) for j in res.examined]
        assert d == sorted(d)
        assert set(res.neighbors) <= set(res.examined)


def test_agent_inside_own_cell():
    rng = np.random.default_rng(2)
    Q = ConvexPolygon.rectangle(0, 10, 0, 10)
    pts = rng.uniform(0, 10, size=(12, 2))
    for i in range(len(pts)):
        assert voronoi_cell(i, pts, Q).contains(pts[i], tol=1e-12)[0]


def test_coincident_agents_rejected():
    Q = ConvexPolygon.rectangle(0, 1, 0, 1)
    with pytest.raises(DuplicatePosition):
        cao_cell(0, [(0.5, 0.5), (0.5, 0.5)], Q)


def test_large_sensing_radius_keeps_cell():
    Q = ConvexPolygon.rectangle(0, 4, 0, 3)
    cell = voronoi_cell(0, [(1, 1), (3, 2)], Q)
    reg = coverage_region(cell, AgentState(0, (1, 1), 10.0, 20.0), Uniform(1.0))
    assert reg.region.area == pytest.approx(cell.area, abs=1e-12)


def test_sensing_disk_bounds_region():
    cell = ConvexPolygon.rectangle(-5, 5, -5, 5)
    reg = coverage_region(cell, AgentState(0, (0, 0), 1.0, 2.0), Uniform(1.0))
    assert reg.region.area == pytest.approx(16 * math.sin(math.pi / 16))


def test_safety_radius_opens_gap():
    Q = ConvexPolygon.rectangle(-1, 1.2, -1, 1)
    pts = np.array([(0.0, 0.0), (0.2, 0.0)])
    regions = partition(agents_at(pts, s=5.0, r=10.0), Q, Uniform(1.0), safety_radius=0.075)
    right_of_0 = regions[0].region.vertices[:, 0].max()
    left_of_1 = regions[1].region.vertices[:, 0].min()
    assert right_of_0 == pytest.approx(0.025)
    assert left_of_1 == pytest.approx(0.175)
    assert left_of_1 - right_of_0 == pytest.approx(0.15)


def test_empty_region_raises():
    with pytest.raises(EmptyRegion):
        coverage_region(ConvexPolygon.empty(), AgentState(0, (0, 0), 1.0, 2.0), Uniform(1.0))


def test_union_covers_q_with_large_disks():
    rng = np.random.default_rng(4)
    for _ in range(10):
        Q = random_convex_polygon(rng)
        pts = sample_inside(rng, Q, int(rng.integers(2, 9)))
        regions = partition(agents_at(pts, s=2 * Q.diameter, r=100.0), Q, Uniform(1.0))
        assert sum(r.region.area for r in regions) == pytest.approx(Q.area, rel=1e-6)


def test_regions_interior_disjoint_and_inside_disks():
    rng = np.random.default_rng(8)
    Q = ConvexPolygon.rectangle(0, 12, 0, 8)
    s = 2.5
    pts = sample_inside(rng, Q, 7)
    regions = partition(agents_at(pts, s=s, r=5.0), Q, GaussianMixture(pts[:3]))
    samples = rng.uniform((0, 0), (12, 8), size=(1000, 2))
    inside = np.array([r.region.strictly_contains(samples) for r in regions])
    assert inside.sum(axis=0).max() <= 1
    for p, r in zip(pts, regions):
        v = r.region.vertices
        assert Q.contains(v, tol=1e-9).all()
        assert np.all(np.hypot(*(v - p).T) <= s + 1e-9)
        assert disk_polygon(p, s).contains(v, tol=1e-9).all()


def test_massless_region_keeps_polygon_without_moments():
    Q = ConvexPolygon.rectangle(0, 2, 0, 1)
    far = GaussianMixture(np.array([[1e3, 1e3]]))
    regions = partition(agents_at([(0.5, 0.5), (1.5, 0.5)], s=5.0), Q, far)
    assert all(r.moments is None and not r.region.is_empty for r in regions)
