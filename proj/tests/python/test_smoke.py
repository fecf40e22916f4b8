"""End-to-end smoke tests for the Python bindings."""

import math

import numpy as np
import pytest

import roomforge

SCENE = {
    "rooms": [
        {
            "name": "den",
            "floor_material": "pine",
            "wall_material": "plaster",
            "corners": [[0, 0], [4, 0], [4, 4], [0, 4]],
            "wall_height": 3.0,
        }
    ],
    "connections": ["den | exterior | doorway | single | plain door"],
    "objects": {
        "crate": {
            "description": "crate",
            "location": "floor",
            "size": [80, 80, 80],
            "quantity": 1,
            "variance type": "same",
            "objects on top": [],
        },
        "shelf": {
            "description": "shelf",
            "location": "floor",
            "size": [100, 180, 30],
            "quantity": 1,
            "variance type": "same",
            "objects on top": [],
        },
    },
    "rules": [
        {"subject": "shelf", "relation": "against_wall", "direction": "north"}
    ],
}


@pytest.fixture(scope="module")
def layout():
    return roomforge.arrange(SCENE, seed=11)


def test_arrange_produces_a_valid_layout(layout):
    names = {p["name"] for p in layout["placed"]}
    assert {"crate", "shelf"} <= names
    assert roomforge.collision_reward(layout) == 0.0
    report = roomforge.reach_report(layout)
    assert report["has_spawn"]
    assert report["reachable"] == report["considered"] > 0


def test_arrange_is_deterministic_per_seed():
    a = roomforge.arrange(SCENE, seed=11)
    b = roomforge.arrange(SCENE, seed=11)
    assert a == b


def test_plan_cameras_zoom_out_bounds(layout):
    trajectory = roomforge.plan_cameras(layout, mode="zoom_out", seed=3)
    assert trajectory["mode"] == "zoom_out"
    assert len(trajectory["poses"]) == 120
    for pose in trajectory["poses"]:
        assert 76.0 <= pose["fovy"] <= 96.0
        assert pose["phase"] == "zoom_out"


def test_plan_cameras_rejects_bad_mode(layout):
    with pytest.raises(ValueError):
        roomforge.plan_cameras(layout, mode="spin")


def test_apply_edit_delete_and_rejection(layout):
    edited = roomforge.apply_edit(layout, {"op": "delete", "name": "crate"})
    assert all(p["name"] != "crate" for p in edited["placed"])
    assert roomforge.collision_reward(edited) == 0.0
    # Shoving the shelf into the corner wall must be refused.
    with pytest.raises(roomforge.EditRejected):
        roomforge.apply_edit(
            layout,
            {"op": "reposition", "name": "shelf", "position": [0.05, 3.95]},
        )


def test_floorplan_svg_renders_objects(layout):
    svg = roomforge.floorplan_svg(layout)
    assert svg.startswith("<svg")
    assert ">crate</text>" in svg


def test_malformed_scene_raises_value_error():
    with pytest.raises(ValueError):
        roomforge.arrange({"rooms": []})


def test_iou3d_endpoints():
    box = ([0.0, 0.0, 0.5], [0.5, 0.5, 0.5])
    assert roomforge.iou3d(*box, 0.0, *box, 0.0) == 1.0
    far = ([5.0, 0.0, 0.5], [0.5, 0.5, 0.5])
    assert roomforge.iou3d(*box, 0.3, *far, 0.9) == 0.0


def test_distillation_gradients():
    theta = np.array([1.0, -2.0, 3.0])
    teacher = roomforge.VelocityOracle.teacher()
    assert roomforge.cfm_loss(teacher, theta, samples=32, seed=5) == 0.0
    grad = roomforge.fds_grad(teacher, theta, samples=32, seed=5)
    assert np.all(grad == 0.0)

    # m=1 over the full range reproduces fds bit for bit.
    rng = np.random.default_rng(0)
    a = rng.normal(size=(4, 4)) * 0.3
    b = rng.normal(size=4)
    oracle = roomforge.VelocityOracle.linear(a, b)
    theta4 = rng.normal(size=4)
    via_itfs = roomforge.itfs_grad(
        oracle, theta4, intervals=[(0.0, 1000.0)], samples=16, seed=9)
    via_fds = roomforge.fds_grad(
        oracle, theta4, t_lo=0.0, t_hi=1.0, samples=16, seed=9)
    assert np.array_equal(via_itfs, via_fds)

    assert roomforge.coarse_to_fine_intervals() == [
        (200.0, 400.0), (400.0, 600.0), (600.0, 800.0)]


def test_descend_contracts_toward_the_target():
    theta0 = np.full(6, 8.0)
    target = np.zeros(6)
    oracle = roomforge.VelocityOracle.exact(target)
    theta, trace, diverged = roomforge.descend_trace(
        oracle, theta0, target, steps=50, lr=0.1)
    assert not diverged
    assert trace[0] == pytest.approx(math.sqrt(6) * 8.0)
    assert trace[-1] < 1e-1 * trace[0]
    assert np.linalg.norm(theta) == pytest.approx(trace[-1])
