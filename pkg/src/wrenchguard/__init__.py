"""Wrench-limited compliant control for end-effector velocity commands.

Per-axis force/torque limits become hard barrier rows in a small dense QP that
trades exponential pose tracking (a relaxed Lyapunov row) against safety; the
resulting twist keeps the sensed wrench inside its band without any model of
the contact.  Around the controller: a deterministic contact simulator with
scenario configs and CSV traces, a classical admittance baseline, and a
WebSocket teleoperation bridge with record/replay.
"""

from .admittance import AdmittanceParams, admittance_command, static_droop
from .contacts import GRAVITY, HangingLoad, HumanGuide, SpringContact
from .controller import (
    ControlCommand,
    ControllerParams,
    build_qp,
    compute_command,
    margin,
)
from .geometry import (
    Pose,
    integrate_pose,
    pose_error,
    quat_conjugate,
    quat_exp,
    quat_log,
    quat_multiply,
    quat_normalize,
    quat_rotate,
    quat_slerp,
)
from .qp import QPResult, kkt_residual, solve_qp
from .scenarios import BUILTIN_SCENARIOS, config_from_dict, load_scenario
from .simulate import (
    SimConfig,
    SimulationEngine,
    Trace,
    read_trace,
    run_scenario,
    summarize,
    trace_to_csv,
    write_trace,
)
from .teleop import (
    PROTOCOL_VERSION,
    TeleopSession,
    build_app,
    replay_recording,
    serve,
)

__version__ = "0.1.0"

__all__ = [
    "AdmittanceParams",
    "admittance_command",
    "static_droop",
    "GRAVITY",
    "HangingLoad",
    "HumanGuide",
    "SpringContact",
    "ControlCommand",
    "ControllerParams",
    "build_qp",
    "compute_command",
    "margin",
    "Pose",
    "integrate_pose",
    "pose_error",
    "quat_conjugate",
    "quat_exp",
    "quat_log",
    "quat_multiply",
    "quat_normalize",
    "quat_rotate",
    "quat_slerp",
    "QPResult",
    "kkt_residual",
    "solve_qp",
    "BUILTIN_SCENARIOS",
    "config_from_dict",
    "load_scenario",
    "SimConfig",
    "SimulationEngine",
    "Trace",
    "read_trace",
    "run_scenario",
    "summarize",
    "trace_to_csv",
    "write_trace",
    "PROTOCOL_VERSION",
    "TeleopSession",
    "build_app",
    "replay_recording",
    "serve",
]
