"""Deterministic contact surrogates: everything the simulated sensor can feel.

Each model maps (pose, time) to the 6-vector wrench the environment applies to
the end effector, expressed in the base frame.  Models are pure functions of
their public fields, so scripted events can retune them mid-run and replays
stay bit-exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geometry import Pose, pose_error, quat_rotate, quat_slerp

GRAVITY = 9.81


def _stiffness_vector(value):
    arr = np.broadcast_to(np.asarray(value, dtype=float), (6,)).copy()
    if np.any(arr < 0.0) or not np.all(np.isfinite(arr)):
        raise ValueError("stiffness must be finite and nonnegative")
    return arr


@dataclass
class SpringContact:
    """Six-axis spring anchored at a fixed pose.

    Pushing the effector a distance d past the anchor along axis i produces
    the restoring wrench component -stiffness[i] * d.
    """

    anchor: Pose = field(default_factory=Pose)
    stiffness: np.ndarray = field(default_factory=lambda: np.zeros(6))

    def __post_init__(self):
        self.stiffness = _stiffness_vector(self.stiffness)

    def wrench(self, pose: Pose, t: float):
        return -self.stiffness * pose_error(pose, self.anchor)


@dataclass
class HangingLoad:
    """Dead weight on a rope, optionally settling onto the ground.

    The attach point is fixed in the gripper frame; its weight pulls straight
    down and, once the load reaches ground_height, a stiff unilateral ground
    spring takes over the supported share (never more than the full weight).
    """

    mass: float = 1.0
    rope_attach_offset: np.ndarray = field(default_factory=lambda: np.zeros(3))
    ground_height: float = -np.inf
    ground_stiffness: float = 2000.0

    def __post_init__(self):
        self.mass = float(self.mass)
        self.rope_attach_offset = np.asarray(self.rope_attach_offset, dtype=float).reshape(3)
        self.ground_height = float(self.ground_height)
        self.ground_stiffness = float(self.ground_stiffness)
        if self.mass < 0.0:
            raise ValueError("mass must be nonnegative")
        if self.ground_stiffness < 0.0:
            raise ValueError("ground_stiffness must be nonnegative")

    def wrench(self, pose: Pose, t: float):
        arm = quat_rotate(pose.orientation, self.rope_attach_offset)
        load_z = pose.position[2] + arm[2]
        weight = self.mass * GRAVITY
        supported = min(weight, self.ground_stiffness * max(0.0, self.ground_height - load_z))
        force = np.array([0.0, 0.0, -(weight - supported)])
        return np.concatenate([force, np.cross(arm, force)])


@dataclass
class HumanGuide:
    """Operator hand modeled as a compliant grip dragging the effector along a path.

    waypoints : list of (time, Pose) samples, times strictly increasing.  The
        intent pose interpolates linearly in position and along the shortest
        great-circle arc in orientation; it clamps at both ends.
    grip_stiffness : per-axis stiffness of the grip coupling.
    """

    waypoints: list = field(default_factory=list)
    grip_stiffness: np.ndarray = field(default_factory=lambda: np.full(6, 50.0))

    def __post_init__(self):
        self.grip_stiffness = _stiffness_vector(self.grip_stiffness)
        if not self.waypoints:
            raise ValueError("waypoints must be non-empty")
        self.waypoints = [(float(t), p if isinstance(p, Pose) else Pose(**p)) for t, p in self.waypoints]
        times = [t for t, _ in self.waypoints]
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError("waypoint times must be strictly increasing")

    def intent(self, t: float) -> Pose:
        t = float(t)
        if t <= self.waypoints[0][0]:
            return self.waypoints[0][1].copy()
        if t >= self.waypoints[-1][0]:
            return self.waypoints[-1][1].copy()
        for (t0, p0), (t1, p1) in zip(self.waypoints, self.waypoints[1:]):
            if t0 <= t <= t1:
                s = (t - t0) / (t1 - t0)
                return Pose(
                    (1.0 - s) * p0.position + s * p1.position,
                    quat_slerp(p0.orientation, p1.orientation, s),
                )
        raise AssertionError("unreachable: waypoint times cover [first, last]")

    def wrench(self, pose: Pose, t: float):
        return -self.grip_stiffness * pose_error(pose, self.intent(t))
