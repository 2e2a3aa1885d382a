"""Barrier-certified velocity commands from per-axis wrench limits.

Each wrench axis carries a barrier ``h_i = 0.5 * (w_i**2 - w_max_i**2)`` that is
negative inside the allowed band and positive outside it.  A quadratic program
trades pose-tracking progress (a Lyapunov descent row, relaxed by a slack
``gamma``) against the hard per-axis rows ``-w_i * v_i <= -alpha_i * h_i`` that
keep the sensed wrench inside its limits.  Contact stiffness never enters the
rows: scaling a row and its bound by the same positive factor leaves the
program unchanged, so the command needs no knowledge of the environment.

The decision vector is ``[v; gamma]`` (6 twist coordinates plus the slack), the
cost is ``||v||**2 + slack_weight * gamma``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .qp import QPResult, solve_qp


def _as_axis_vector(value, name):
    arr = np.broadcast_to(np.asarray(value, dtype=float), (6,)).copy()
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be finite")
    return arr


@dataclass
class ControllerParams:
    """Tuning for the wrench-limited controller.

    wrench_limits : per-axis |w| bound, N for the three forces, N*m for the
        three torques; scalar broadcasts to all axes.
    clf_rate : requested exponential tracking rate (lambda > 0).
    slack_weight : linear penalty on the tracking-relaxation slack (k > 0).
    cbf_rate : barrier decay rate alpha > 0; scalar or per-axis.  Larger values
        let the wrench approach its limit faster but push back harder outside.
    """

    wrench_limits: np.ndarray = field(default_factory=lambda: np.full(6, 25.0))
    clf_rate: float = 10.0
    slack_weight: float = 1.0
    cbf_rate: np.ndarray = field(default_factory=lambda: np.ones(6))

    def __post_init__(self):
        self.wrench_limits = _as_axis_vector(self.wrench_limits, "wrench_limits")
        self.cbf_rate = _as_axis_vector(self.cbf_rate, "cbf_rate")
        self.clf_rate = float(self.clf_rate)
        self.slack_weight = float(self.slack_weight)
        if np.any(self.wrench_limits <= 0.0):
            raise ValueError("wrench_limits must be positive")
        if np.any(self.cbf_rate <= 0.0):
            raise ValueError("cbf_rate must be positive")
        if self.clf_rate <= 0.0:
            raise ValueError("clf_rate must be positive")
        if self.slack_weight <= 0.0:
            raise ValueError("slack_weight must be positive")


@dataclass
class ControlCommand:
    twist: np.ndarray  # (6,) [v; w] to command, base frame
    slack: float  # tracking relaxation actually used (gamma >= 0)
    qp: QPResult


def margin(wrench, limits):
    """Per-axis barrier value h_i = 0.5 * (w_i^2 - w_max_i^2).

    Negative inside the allowed band, zero on the boundary, positive outside.
    """
    w = np.asarray(wrench, dtype=float).reshape(6)
    lim = np.broadcast_to(np.asarray(limits, dtype=float), (6,))
    return 0.5 * (w * w - lim * lim)


def build_qp(wrench, error, params: ControllerParams):
    """Assemble (cost_diagonal, cost_linear, rows, bounds) for one control tick.

    Rows 0..5 are the per-axis wrench barriers, row 6 is the relaxed tracking
    row ``e . v - gamma <= -(lambda/2) ||e||^2``, row 7 keeps gamma >= 0.
    """
    w = np.asarray(wrench, dtype=float).reshape(6)
    e = np.asarray(error, dtype=float).reshape(6)
    h = margin(w, params.wrench_limits)
    d = np.array([1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 0.0])
    c = np.array([0.0, 0.0, 0.0, 0.0, 0.0, 0.0, params.slack_weight])
    A = np.zeros((8, 7))
    b = np.zeros(8)
    for i in range(6):
        A[i, i] = -w[i]
        b[i] = -params.cbf_rate[i] * h[i]
    A[6, :6] = e
    A[6, 6] = -1.0
    b[6] = -0.5 * params.clf_rate * float(e @ e)
    A[7, 6] = -1.0
    return d, c, A, b


def compute_command(wrench, error, params: ControllerParams) -> ControlCommand:
    """One control tick: sensed wrench + pose error -> certified twist command.

    The program is feasible for every wrench (each barrier row touches a
    different velocity coordinate and the tracking row is slack-relaxed), so an
    infeasible result indicates a solver fault and raises.
    """
    d, c, A, b = build_qp(wrench, error, params)
    res = solve_qp(d, c, A, b)
    if res.status != "optimal":
        raise RuntimeError("controller program unexpectedly infeasible")
    return ControlCommand(twist=res.x[:6].copy(), slack=float(res.x[6]), qp=res)
