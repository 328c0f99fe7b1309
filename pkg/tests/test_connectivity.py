import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from covtrack.connectivity import (
    MotionConstraint,
    compute_mst,
    components,
    is_connected,
    limit_gain,
    limit_goal,
    motion_constraints,
)
from covtrack.errors import DisconnectedGraph
from covtrack.verify import brute_force_mst_weight


def test_collinear_chain():
    tree = compute_mst([(0, 0), (1, 0), (3, 0)], 6.0)
    assert {(a, b) for a, b, _ in tree.edges} == {(0, 1), (1, 2)}
    assert tree.total_weight == 3.0


def test_unit_square_tie_break():
    # every side has length 1; ties go to the smallest (source, candidate)
    tree = compute_mst([(0, 0), (1, 0), (1, 1), (0, 1)], 2.0)
    assert [(a, b) for a, b, _ in tree.edges] == [(0, 1), (0, 3), (1, 2)]
    assert tree.total_weight == 3.0
    assert tree.total_weight == brute_force_mst_weight([(0, 0), (1, 0), (1, 1), (0, 1)], 2.0)


def test_two_clusters_disconnected():
    pts = [(0, 0), (1, 0), (11, 0), (12, 0)]
    with pytest.raises(DisconnectedGraph) as info:
        compute_mst(pts, 6.0)
    assert info.value.components == [[0, 1], [2, 3]]
    assert components(pts, 6.0) == [[0, 1], [2, 3]]
    assert not is_connected(pts, 6.0)


def test_single_node_tree():
    tree = compute_mst([(3, 4)], 1.0)
    assert tree.edges == () and tree.total_weight == 0.0


def test_tree_shape_and_bounds():
    rng = np.random.default_rng(0)
    for _ in range(50):
        pts = rng.uniform(0, 6, size=(int(rng.integers(2, 12)), 2))
        r = 8.5  # diagonal of the box, always connected
        tree = compute_mst(pts, r)
        assert len(tree.edges) == len(pts) - 1
        assert all(w <= r for _, _, w in tree.edges)
        assert components_of(tree, len(pts)) == 1


def components_of(tree, n):
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            a = parent[a]
        return a

    for a, b, _ in tree.edges:
        parent[find(a)] = find(b)
    return len({find(i) for i in range(n)})


def test_matches_enumeration_small():
    rng = np.random.default_rng(12)
    for _ in range(40):
        n = int(rng.integers(3, 7))
        pts = rng.uniform(0, 10, size=(n, 2))
        r = float(rng.uniform(4, 12))
        expect = brute_force_mst_weight(pts, r)
        if expect is None:
            with pytest.raises(DisconnectedGraph):
                compute_mst(pts, r)
        else:
            assert compute_mst(pts, r).total_weight == expect


def test_deterministic():
    pts = np.random.default_rng(1).uniform(0, 5, size=(9, 2))
    assert compute_mst(pts, 10.0) == compute_mst(pts.copy(), 10.0)


def test_constraint_for_link():
    tree = compute_mst([(0, 0), (6, 0)], 6.0)
    cons = motion_constraints(tree, [(0, 0), (6, 0)], 6.0)
    for c in cons:
        assert len(c) == 1
        assert np.allclose(c[0].center, (3, 0)) and c[0].radius == 3.0


def test_chain_degrees():
    pts = [(0, 0), (2, 0), (4, 0)]
    cons = motion_constraints(compute_mst(pts, 3.0), pts, 3.0)
    assert [len(c) for c in cons] == [1, 2, 1]


def test_limit_goal_example():
    c = MotionConstraint(np.array([3.0, 0.0]), 3.0)
    assert limit_gain((0, 0), (10, 0), [c]) == pytest.approx(0.6)
    assert np.allclose(limit_goal((0, 0), (10, 0), [c]), (6, 0))


def test_goal_inside_untouched():
    c = MotionConstraint(np.array([3.0, 0.0]), 3.0)
    g = np.array([4.0, 1.0])
    assert np.array_equal(limit_goal((0, 0), g, [c]), g)
    assert np.array_equal(limit_goal((0, 0), g, []), g)


def coord(bound):
    return st.floats(-bound, bound, allow_subnormal=False)


@settings(max_examples=200, deadline=None)
@given(
    pts=st.lists(st.tuples(coord(5), coord(5)), min_size=2, max_size=8, unique=True),
    goals=st.lists(st.tuples(coord(20), coord(20)), min_size=8, max_size=8),
)
def test_simultaneous_moves_keep_links(pts, goals):
    pts = np.array(pts)
    if min(math.dist(a, b) for i, a in enumerate(pts) for b in pts[i + 1 :]) < 1e-6:
        return
    r = 15.0  # box diagonal, always connected
    tree = compute_mst(pts, r)
    cons = motion_constraints(tree, pts, r)
    new = np.array([limit_goal(p, g, c) for p, g, c in zip(pts, goals, cons)])
    for i, j, _ in tree.edges:
        assert math.dist(new[i], new[j]) <= r
    for p, g, q in zip(pts, goals, new):
        # on the segment [p, g]
        d = np.asarray(g) - p
        if d @ d > 1e-12:
            k = float((q - p) @ d / (d @ d))
            assert -1e-12 <= k <= 1 + 1e-12
            assert np.allclose(p + k * d, q, atol=1e-9)
