"""SE(3) primitives: poses, quaternion helpers, and the task-space error map.

Conventions used throughout the package:

* quaternions are scalar-first ``(w, x, y, z)`` and unit-norm,
* twists are 6-vectors ``[vx, vy, vz, wx, wy, wz]`` expressed in the base frame,
* wrenches are 6-vectors ``[fx, fy, fz, tx, ty, tz]` expressed in the base frame,
* pose errors are 6-vectors ``[position error; axis-angle rotation error]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

_EPS = 1e-12


def quat_normalize(q):
    """Return q scaled to unit norm. Raises on (near-)zero input."""
    q = np.asarray(q, dtype=float)
    n = np.linalg.norm(q)
    if n < _EPS:
        raise ValueError("cannot normalize a zero quaternion")
    return q / n


def quat_multiply(q1, q2):
    """Hamilton product q1 * q2 (both scalar-first)."""
    w1, x1, y1, z1 = np.asarray(q1, dtype=float)
    w2, x2, y2, z2 = np.asarray(q2, dtype=float)
    # grouping pairs the terms that cancel for q2 = conj(q1), so q * conj(q)
    # has an exactly-zero vector part (pose_error(p, p) == 0 exactly)
    return np.array(
        [
            w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
            (w1 * x2 + x1 * w2) + (y1 * z2 - z1 * y2),
            (w1 * y2 + y1 * w2) + (z1 * x2 - x1 * z2),
            (w1 * z2 + z1 * w2) + (x1 * y2 - y1 * x2),
        ]
    )


def quat_conjugate(q):
    q = np.asarray(q, dtype=float)
    return np.array([q[0], -q[1], -q[2], -q[3]])


def quat_rotate(q, v):
    """Rotate a 3-vector by the rotation that q represents."""
    q = np.asarray(q, dtype=float)
    v = np.asarray(v, dtype=float)
    qv = np.array([0.0, v[0], v[1], v[2]])
    return quat_multiply(quat_multiply(q, qv), quat_conjugate(q))[1:]


def quat_exp(rotvec):
    """Exponential map: rotation vector (axis * angle, radians) -> unit quaternion."""
    rotvec = np.asarray(rotvec, dtype=float)
    angle = np.linalg.norm(rotvec)
    if angle < _EPS:
        # first-order expansion keeps the map smooth through zero
        return quat_normalize(np.array([1.0, *(0.5 * rotvec)]))
    axis = rotvec / angle
    half = 0.5 * angle
    return np.array([np.cos(half), *(np.sin(half) * axis)])


def quat_log(q):
    """Logarithm map: unit quaternion -> rotation vector with angle in [0, pi]."""
    q = quat_normalize(q)
    if q[0] < 0.0:  # q and -q are the same rotation; pick the short way around
        q = -q
    vec = q[1:]
    n = np.linalg.norm(vec)
    if n < _EPS:
        return 2.0 * vec  # small-angle limit of 2*atan2(n, w)/n
    return (2.0 * np.arctan2(n, q[0]) / n) * vec


def quat_slerp(q0, q1, s):
    """Spherical interpolation from q0 (s=0) to q1 (s=1) along the shorter arc."""
    q0 = quat_normalize(q0)
    q1 = quat_normalize(q1)
    if float(np.dot(q0, q1)) < 0.0:
        q1 = -q1
    # relative rotation stays in the shorter arc after the sign fix above
    rel = quat_multiply(q1, quat_conjugate(q0))
    return quat_multiply(quat_exp(float(s) * quat_log(rel)), q0)


@dataclass
class Pose:
    """Rigid-body pose: position in meters, orientation as a unit quaternion (w, x, y, z)."""

    position: np.ndarray = field(default_factory=lambda: np.zeros(3))
    orientation: np.ndarray = field(default_factory=lambda: np.array([1.0, 0.0, 0.0, 0.0]))

    def __post_init__(self):
        self.position = np.asarray(self.position, dtype=float).reshape(3).copy()
        q = np.asarray(self.orientation, dtype=float).reshape(4).copy()
        n = np.linalg.norm(q)
        if abs(n - 1.0) > 1e-9:
            q = quat_normalize(q)  # leave already-unit inputs bit-identical
        self.orientation = q

    def copy(self) -> "Pose":
        return Pose(self.position.copy(), self.orientation.copy())

    @staticmethod
    def identity() -> "Pose":
        return Pose()


def pose_error(current: Pose, desired: Pose):
    """6-vector task-space error [p_cur - p_des; axis-angle of the relative rotation].

    The rotational part is the base-frame rotation carrying the desired
    orientation onto the current one, so commanding the base-frame twist
    ``-pose_error`` drives the pose to the target for any desired orientation.
    Returns exactly zero when the poses coincide.
    """
    dp = current.position - desired.position
    rel = quat_multiply(current.orientation, quat_conjugate(desired.orientation))
    return np.concatenate([dp, quat_log(rel)])


def integrate_pose(pose: Pose, twist, dt: float) -> Pose:
    """Advance a pose by a constant base-frame twist [v; w] over dt seconds."""
    twist = np.asarray(twist, dtype=float).reshape(6)
    position = pose.position + dt * twist[:3]
    orientation = quat_multiply(quat_exp(dt * twist[3:]), pose.orientation)
    return Pose(position, orientation)
