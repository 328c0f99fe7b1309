import numpy as np
import pytest
import yaml

from covtrack.config import apply_axis, config_from_dict, load_config, load_sweep
from covtrack.engine import Integrator, Mode, Unicycle
from covtrack.errors import ParseError, ValidationError
from covtrack.tracking import Line

from .conftest import BASE, CONFIGS


def base_dict():
    return yaml.safe_load(BASE.read_text())


def test_base_file():
    cfg = load_config(BASE)
    assert len(cfg.agents_init) == 6
    assert cfg.sensing_radius == 3.0 and cfg.comm_radius == 6.0
    assert isinstance(cfg.formation.path, Line) and cfg.formation.path.speed == 0.3
    assert (cfg.formation.layout.rows, cfg.formation.layout.cols) == (3, 4)
    assert cfg.mode is Mode.BOUNDARY
    assert isinstance(cfg.kinematics, Integrator)
    # agent grid sits 10 m behind the formation center
    pts = np.array([p for p, _, _ in cfg.agents_init])
    assert np.allclose(pts.mean(axis=0), (-10.0, 0.0))


def test_agent_outside_q_is_named():
    d = base_dict()
    del d["agents"]["grid"]
    d["agents"]["positions"] = [[0, 0], [1, 0], [100, 0]]
    with pytest.raises(ValidationError) as info:
        config_from_dict(d)
    assert any("agents.positions[2]" in p for p in info.value.problems)


def test_disconnected_graph_lists_components():
    d = base_dict()
    del d["agents"]["grid"]
    d["agents"]["positions"] = [[0, 0], [1, 0], [20, 0], [21, 0]]
    with pytest.raises(ValidationError) as info:
        config_from_dict(d)
    assert any("[0, 1] | [2, 3]" in p for p in info.value.problems)


def test_every_problem_reported():
    d = base_dict()
    d["max_steps"] = 0
    d["grid_resolution"] = 4
    d["agents"]["sensing_radius"] = "wide"
    with pytest.raises(ValidationError) as info:
        config_from_dict(d)
    assert any(p.startswith("agents.sensing_radius") for p in info.value.problems)
    d["agents"]["sensing_radius"] = 3.0
    with pytest.raises(ValidationError) as info:
        config_from_dict(d)
    joined = "\n".join(info.value.problems)
    assert "max_steps" in joined and "grid_resolution" in joined


def test_missing_formation_in_tracking_mode():
    d = base_dict()
    del d["formation"]
    with pytest.raises(ValidationError, match="formation"):
        config_from_dict(d)


def test_parse_errors(tmp_path):
    bad = tmp_path / "bad.yaml"
    bad.write_text("name: [unclosed\n")
    with pytest.raises(ParseError):
        load_config(bad)
    with pytest.raises(ParseError):
        load_config(tmp_path / "missing.yaml")
    bad.write_text("- just\n- a list\n")
    with pytest.raises(ParseError):
        load_config(bad)


def test_unicycle_kinematics_parsed():
    d = base_dict()
    d["kinematics"] = {"kind": "unicycle", "max_linear": 0.05, "max_angular": 0.3}
    cfg = config_from_dict(d)
    assert cfg.kinematics == Unicycle(0.05, 0.3)


def test_sensing_axis_keeps_r_equal_2s():
    cfg = apply_axis(load_config(BASE), "sensing_radius", 2.5)
    assert {(s, r) for _, s, r in cfg.agents_init} == {(2.5, 5.0)}


def test_agent_count_axis():
    base = load_config(BASE)
    for n, shape in ((4, (2, 2)), (8, (2, 4)), (16, (4, 4))):
        cfg = apply_axis(base, "agent_count", n)
        assert len(cfg.agents_init) == n
        assert (cfg.agent_grid.rows, cfg.agent_grid.cols) == shape
        pts = np.array([p for p, _, _ in cfg.agents_init])
        assert np.allclose(pts.mean(axis=0), (-10.0, 0.0))
        assert cfg.problems() == []


def test_velocity_axis():
    cfg = apply_axis(load_config(BASE), "velocity", 0.45)
    assert cfg.formation.path.speed == 0.45


def test_shipped_sweeps_load():
    expect = {
        "sweep_velocity.yaml": ("velocity", 6, 60),
        "sweep_sensing.yaml": ("sensing_radius", 5, 80),
        "sweep_comm.yaml": ("comm_radius", 6, 80),
        "sweep_agents.yaml": ("agent_count", 3, 300),
        "sweep_method.yaml": ("mode", 2, 30),
    }
    for name, (axis, count, steps) in expect.items():
        spec = load_sweep(CONFIGS / name)
        assert spec.axis == axis and len(spec.values) == count
        assert all(c.max_steps == steps for _, c in spec.configs())
    comm = load_sweep(CONFIGS / "sweep_comm.yaml")
    assert {c.sensing_radius for _, c in comm.configs()} == {2.5}
    assert [c.comm_radius for _, c in comm.configs()] == [5.0, 6.0, 7.0, 8.0, 9.0, 10.0]


def test_sweep_rejects_unknown_axis(tmp_path):
    f = tmp_path / "s.yaml"
    f.write_text(f"base: {BASE}\naxis: colour\nvalues: [1]\n")
    with pytest.raises(ValidationError, match="axis"):
        load_sweep(f)
