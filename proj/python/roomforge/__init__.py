"""Constraint-driven room layouts, camera trajectories, and distillation toys.

The native module (`roomforge._core`) exchanges scene and layout documents
as JSON text; the wrappers here accept and return plain dicts/lists so a
session looks like::

    import roomforge

    layout = roomforge.arrange(scene, seed=7)
    assert roomforge.collision_reward(layout) == 0.0
    trajectory = roomforge.plan_cameras(layout, mode="hybrid", seed=7)

The distillation helpers (`VelocityOracle`, `cfm_loss`, `sds_grad`,
`fds_grad`, `itfs_grad`, `descend_trace`) speak numpy arrays directly and
are re-exported unchanged.
"""

import json as _json

from roomforge import _core
from roomforge._core import (
    EditRejected,
    VelocityOracle,
    cfm_loss,
    coarse_to_fine_intervals,
    descend_trace,
    fds_grad,
    iou3d,
    itfs_grad,
    sds_grad,
)

__all__ = [
    "EditRejected",
    "VelocityOracle",
    "apply_edit",
    "arrange",
    "cfm_loss",
    "coarse_to_fine_intervals",
    "collision_reward",
    "descend_trace",
    "fds_grad",
    "floorplan_svg",
    "iou3d",
    "itfs_grad",
    "plan_cameras",
    "reach_report",
    "sds_grad",
]


def _text(document):
    """Accept either a parsed document or raw JSON text."""
    if isinstance(document, str):
        return document
    return _json.dumps(document)


def arrange(scene, *, seed=0, budget_iters=200, cell_size=0.1):
    """Arrange a scene description (dict or JSON text) into a layout dict."""
    return _json.loads(
        _core.arrange(_text(scene), seed, budget_iters, cell_size))


def plan_cameras(layout, *, mode="hybrid", seed=0, target="", eye_height=1.6,
                 cell_size=0.1):
    """Plan a camera trajectory; returns {"mode": ..., "poses": [...]}."""
    return _json.loads(
        _core.plan_cameras(_text(layout), mode, seed, target, eye_height,
                           cell_size))


def apply_edit(layout, edit, *, seed=0, budget_iters=200, cell_size=0.1):
    """Apply one edit op (or a list of ops); returns the new layout dict.

    Raises EditRejected when the change would break the zero-collision or
    reachability contract; the input layout is never modified.
    """
    return _json.loads(
        _core.apply_edit(_text(layout), _text(edit), seed, budget_iters,
                         cell_size))


def collision_reward(layout):
    """Collision reward of a layout: 0.0 exactly when nothing overlaps."""
    return _core.collision_reward(_text(layout))


def reach_report(layout, *, cell_size=0.1):
    """Walkability report dict for a layout's top-level objects."""
    return _json.loads(_core.reach_report(_text(layout), cell_size))


def floorplan_svg(layout):
    """Top-down SVG rendering of a layout, as a string."""
    return _core.floorplan_svg(_text(layout))
