import math

import numpy as np
import pytest

from covtrack.partition import AgentState
from covtrack.tracking import (
    Arc,
    FormationTrajectory,
    GridLayout,
    Line,
    Scripted,
    Static,
    TargetState,
    advance_targets,
    formation_center,
    redefine_boundary,
    update_density,
)


def pos(targets):
    return np.array([t.position for t in targets])


def agents(*points):
    return [AgentState(i, p, 1.0, 2.0) for i, p in enumerate(points)]


def targets(*points):
    return [TargetState(i, p) for i, p in enumerate(points)]


def test_static_targets_do_not_move():
    traj = FormationTrajectory(GridLayout(3, 4, 2.0))
    assert np.array_equal(pos(advance_targets(traj, 0)), pos(advance_targets(traj, 17)))


def test_grid_layout_shape_and_center():
    p = GridLayout(3, 4, 1.0, (2.0, -1.0)).positions()
    assert p.shape == (12, 2)
    assert np.allclose(p.mean(axis=0), (2.0, -1.0))
    assert np.ptp(p[:, 0]) == 3.0 and np.ptp(p[:, 1]) == 2.0


def test_line_displacement():
    traj = FormationTrajectory(GridLayout(3, 4, 2.0), Line((1.0, 0.0), 0.3))
    d = pos(advance_targets(traj, 10)) - pos(advance_targets(traj, 0))
    assert np.allclose(d, (3.0, 0.0))


def test_line_direction_is_normalized():
    traj = FormationTrajectory(GridLayout(1, 1, 1.0), Line((3.0, 4.0), 1.0))
    assert np.allclose(pos(advance_targets(traj, 1))[0], (0.6, 0.8))


def test_arc_keeps_linear_speed():
    layout = GridLayout(1, 2, 0.6, (0.45, 0.0))  # targets at 0.15 and 0.75 from the origin
    traj = FormationTrajectory(layout, Arc((0.0, 0.0), 0.05))
    p0, p1 = pos(advance_targets(traj, 0)), pos(advance_targets(traj, 1))
    ang = np.abs(np.arctan2(p1[:, 1], p1[:, 0]) - np.arctan2(p0[:, 1], p0[:, 0]))
    assert np.allclose(traj.radii(), (0.15, 0.75))
    assert ang[1] == pytest.approx(ang[0] / 5.0)
    assert np.allclose(np.hypot(*p1.T), (0.15, 0.75))


def test_scripted_holds_last_waypoint():
    wp = (((0.0, 0.0),), ((1.0, 0.0),))
    traj = FormationTrajectory(GridLayout(1, 1, 1.0), Scripted(wp))
    assert np.allclose(pos(advance_targets(traj, 5)), [(1.0, 0.0)])


def test_advance_is_pure():
    traj = FormationTrajectory(GridLayout(3, 4, 2.0), Line((1.0, 1.0), 0.4))
    assert np.array_equal(pos(advance_targets(traj, 7)), pos(advance_targets(traj, 7)))


def test_density_values():
    phi = update_density(targets((1.0, 2.0)))
    assert phi(np.array([[1.0, 2.0]]))[0] == 1.0
    assert phi(np.array([[2.0, 2.0]]))[0] == pytest.approx(math.exp(-1))
    assert update_density(targets((0, 0), (0, 0)))(np.zeros((1, 2)))[0] == pytest.approx(2.0)


def test_density_positive_and_bounded():
    ts = targets(*np.random.default_rng(0).uniform(-3, 3, size=(5, 2)))
    q = np.random.default_rng(1).uniform(-6, 6, size=(2000, 2))
    v = update_density(ts)(q)
    assert np.all(v > 0) and np.all(v <= 5)


@pytest.mark.parametrize(
    "ag, tg, box",
    [
        ([(0, 0)], [(2, 3)], (0, 2, 0, 3)),
        ([(-1, 0), (1, 0)], [(0, 2)], (-1, 1, 0, 2)),
    ],
)
def test_bounding_rectangle(ag, tg, box):
    rect = redefine_boundary(agents(*ag), targets(*tg))
    assert np.allclose(rect.bounds, box)


def test_degenerate_rectangle_is_padded():
    rect = redefine_boundary(agents((1, 1)), targets((1, 1)))
    assert np.allclose(rect.bounds, (1 - 1e-3, 1 + 1e-3, 1 - 1e-3, 1 + 1e-3))
    flat = redefine_boundary(agents((0, 0)), targets((4, 0)))
    assert np.allclose(flat.bounds, (0, 4, -1e-3, 1e-3))


def test_rectangle_contains_everything():
    rng = np.random.default_rng(3)
    ag = agents(*rng.uniform(-5, 5, size=(6, 2)))
    tg = targets(*rng.uniform(0, 9, size=(12, 2)))
    rect = redefine_boundary(ag, tg)
    assert rect.contains(np.array([a.position for a in ag] + [t.position for t in tg]), tol=1e-12).all()


def test_formation_center():
    assert np.allclose(formation_center(targets((3, 4))), (3, 4))
    assert np.allclose(formation_center(targets((0, 0), (2, 0))), (1, 0))
    grid = advance_targets(FormationTrajectory(GridLayout(3, 4, 1.0, (5.0, 6.0))), 0)
    assert np.allclose(formation_center(grid), (5.0, 6.0))


def test_invalid_paths():
    with pytest.raises(ValueError):
        Line((0.0, 0.0), 1.0)
    with pytest.raises(ValueError):
        Line((1.0, 0.0), -0.1)
    with pytest.raises(ValueError):
        GridLayout(0, 3, 1.0)
    with pytest.raises(ValueError):
        Scripted(())
