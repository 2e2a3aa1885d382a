"""Fixed-gain admittance baseline: comply with force by drooping from the target.

The commanded twist realizes a per-axis spring-damper around the desired pose,

    v_i = (w_i - stiffness_i * e_i) / damping_i,

so under a constant external wrench the effector settles at a static offset
of w_i / stiffness_i from the target -- however large that wrench is.  This is
the behavior the wrench-limited controller is compared against: compliance is
achieved, but nothing bounds the interaction force.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class AdmittanceParams:
    stiffness: np.ndarray = field(default_factory=lambda: np.full(6, 40.0))
    damping: np.ndarray = field(default_factory=lambda: np.full(6, 100.0))

    def __post_init__(self):
        self.stiffness = np.broadcast_to(np.asarray(self.stiffness, dtype=float), (6,)).copy()
        self.damping = np.broadcast_to(np.asarray(self.damping, dtype=float), (6,)).copy()
        if np.any(self.stiffness <= 0.0) or not np.all(np.isfinite(self.stiffness)):
            raise ValueError("stiffness must be positive and finite")
        if np.any(self.damping <= 0.0) or not np.all(np.isfinite(self.damping)):
            raise ValueError("damping must be positive and finite")


def admittance_command(wrench, error, params: AdmittanceParams):
    """Twist realizing the spring-damper law; decoupled per axis."""
    w = np.asarray(wrench, dtype=float).reshape(6)
    e = np.asarray(error, dtype=float).reshape(6)
    return (w - params.stiffness * e) / params.damping


def static_droop(wrench, params: AdmittanceParams):
    """Equilibrium offset from the target under a constant wrench."""
    return np.asarray(wrench, dtype=float).reshape(6) / params.stiffness
