"""Deterministic closed-loop contact simulator.

The loop runs the controller at ``control_rate`` and integrates the velocity
plant at ``plant_rate`` with the commanded twist held between ticks (the final
substep of each interval is shortened when the rates do not divide).  The
sensor path is wrench -> additive Gaussian noise -> optional first-order
low-pass -> bias subtraction; the bias is the very first measurement, taken
before any scripted event fires, which is how a tool's own weight is nulled
out on real hardware.

Everything is a pure function of the config (including the noise seed), so a
run is reproducible bit for bit; trace CSVs are written with round-trippable
float formatting to keep replay comparisons exact.
"""

from __future__ import annotations

import copy
import math
import re
from dataclasses import dataclass, field

import numpy as np

from .admittance import AdmittanceParams, admittance_command
from .contacts import HangingLoad, HumanGuide, SpringContact
from .controller import ControllerParams, compute_command, margin
from .geometry import Pose, integrate_pose, pose_error

TRACE_HEADER = (
    "t,px,py,pz,qw,qx,qy,qz,vx,vy,vz,wx,wy,wz,"
    "fx,fy,fz,tx,ty,tz,h_fx,h_fy,h_fz,h_tx,h_ty,h_tz,gamma,status"
)
RAW_TRACE_HEADER = "t,fx,fy,fz,tx,ty,tz"

_CONTACT_TYPES = (SpringContact, HangingLoad, HumanGuide)
_PATH_RE = re.compile(r"^contacts\[(\d+)\]\.([A-Za-z_]+)$|^desired_pose\.([A-Za-z_]+)$|^controller\.([A-Za-z_]+)$")


@dataclass
class SimConfig:
    duration: float
    control_rate: float = 30.0
    plant_rate: float = 1000.0
    seed: int = 0
    noise_std: np.ndarray = field(default_factory=lambda: np.zeros(6))
    bias_compensation: bool = True
    lowpass_tau: float = 0.0
    controller: str = "wrench_qp"  # "wrench_qp" | "admittance"
    controller_params: object = field(default_factory=ControllerParams)
    report_limits: np.ndarray = None  # margins column for baseline runs
    contacts: list = field(default_factory=list)
    initial_pose: Pose = field(default_factory=Pose)
    desired_pose: Pose = field(default_factory=Pose)
    events: list = field(default_factory=list)

    def __post_init__(self):
        self.duration = float(self.duration)
        self.control_rate = float(self.control_rate)
        self.plant_rate = float(self.plant_rate)
        self.seed = int(self.seed)
        self.noise_std = np.broadcast_to(np.asarray(self.noise_std, dtype=float), (6,)).copy()
        self.lowpass_tau = float(self.lowpass_tau)
        if self.duration <= 0.0:
            raise ValueError("duration must be positive")
        if self.control_rate <= 0.0 or self.plant_rate <= 0.0:
            raise ValueError("rates must be positive")
        if self.plant_rate < self.control_rate:
            raise ValueError("plant_rate must be at least control_rate")
        if np.any(self.noise_std < 0.0):
            raise ValueError("noise_std must be nonnegative")
        if self.lowpass_tau < 0.0:
            raise ValueError("lowpass_tau must be nonnegative")
        if self.controller == "wrench_qp":
            if not isinstance(self.controller_params, ControllerParams):
                raise ValueError("wrench_qp controller requires ControllerParams")
        elif self.controller == "admittance":
            if not isinstance(self.controller_params, AdmittanceParams):
                raise ValueError("admittance controller requires AdmittanceParams")
        else:
            raise ValueError(f"unknown controller {self.controller!r}")
        for c in self.contacts:
            if not isinstance(c, _CONTACT_TYPES):
                raise ValueError(f"unknown contact model {type(c).__name__}")
        if self.report_limits is not None:
            self.report_limits = np.broadcast_to(np.asarray(self.report_limits, dtype=float), (6,)).copy()
        for ev in self.events:
            _validate_event(ev)


def _validate_event(ev):
    if not isinstance(ev, dict):
        raise ValueError("events must be dicts")
    extra = set(ev) - {"time", "set", "ramp"}
    if extra:
        raise ValueError(f"unknown event keys {sorted(extra)}")
    if "time" not in ev or "set" not in ev:
        raise ValueError("events need 'time' and 'set'")
    if float(ev["time"]) < 0.0:
        raise ValueError("event time must be nonnegative")
    if float(ev.get("ramp", 0.0)) < 0.0:
        raise ValueError("event ramp must be nonnegative")
    if not isinstance(ev["set"], dict) or not ev["set"]:
        raise ValueError("event 'set' must be a non-empty mapping")
    for path in ev["set"]:
        if not _PATH_RE.match(path):
            raise ValueError(f"unsupported event path {path!r}")


@dataclass
class Trace:
    t: np.ndarray
    pose: np.ndarray  # (N, 7) px py pz qw qx qy qz
    twist: np.ndarray  # (N, 6) commanded
    wrench: np.ndarray  # (N, 6) compensated (what the controller saw)
    raw_wrench: np.ndarray  # (N, 6) before noise/filter/bias
    margins: np.ndarray  # (N, 6)
    gamma: np.ndarray  # (N,)
    status: list

    def __len__(self):
        return self.t.size


class _ScheduledEvent:
    def __init__(self, spec):
        self.time = float(spec["time"])
        self.ramp = float(spec.get("ramp", 0.0))
        self.targets = dict(spec["set"])
        self.start_values = None
        self.done = False


class SimulationEngine:
    """Stepwise form of the loop; the teleop service drives this directly."""

    def __init__(self, config: SimConfig):
        self.config = config
        self.pose = config.initial_pose.copy()
        self.desired_pose = config.desired_pose.copy()
        self.contacts = copy.deepcopy(config.contacts)
        self.controller_params = copy.deepcopy(config.controller_params)
        self.rng = np.random.default_rng(config.seed)
        self.tick_index = 0
        self.bias = None
        self._filter_state = None
        self._events = sorted((_ScheduledEvent(e) for e in config.events), key=lambda e: e.time)
        self._injected = np.zeros(6)
        self._dt = 1.0 / config.control_rate

    # -- wiring for interactive sessions -------------------------------------
    def set_injected_wrench(self, wrench):
        """Extra environment wrench (summed client input); latched until changed."""
        self._injected = np.asarray(wrench, dtype=float).reshape(6).copy()

    def set_desired_pose(self, pose: Pose):
        self.desired_pose = pose.copy()

    def set_wrench_limits(self, limits):
        if not isinstance(self.controller_params, ControllerParams):
            raise ValueError("active controller has no wrench limits")
        self.controller_params.wrench_limits = limits
        self.controller_params.__post_init__()

    # -- event plumbing -------------------------------------------------------
    def _resolve_path(self, path):
        m = _PATH_RE.match(path)
        if not m:
            raise ValueError(f"unsupported event path {path!r}")
        if m.group(1) is not None:
            idx = int(m.group(1))
            if idx >= len(self.contacts):
                raise ValueError(f"event path {path!r}: no contact at index {idx}")
            return self.contacts[idx], m.group(2)
        if m.group(3) is not None:
            return self.desired_pose, m.group(3)
        return self.controller_params, m.group(4)

    def _apply_events(self, t):
        for ev in self._events:
            if ev.done or t < ev.time - 1e-12:
                continue
            if ev.start_values is None:
                ev.start_values = {}
                for path in ev.targets:
                    obj, name = self._resolve_path(path)
                    if not hasattr(obj, name):
                        raise ValueError(f"event path {path!r}: no such field")
                    ev.start_values[path] = copy.deepcopy(getattr(obj, name))
            frac = 1.0 if ev.ramp <= 0.0 else min(1.0, (t - ev.time) / ev.ramp)
            for path, target in ev.targets.items():
                obj, name = self._resolve_path(path)
                if frac >= 1.0:
                    value = target
                else:
                    start = np.asarray(ev.start_values[path], dtype=float)
                    value = (1.0 - frac) * start + frac * np.asarray(target, dtype=float)
                setattr(obj, name, value)
                if hasattr(obj, "__post_init__"):
                    obj.__post_init__()
            if frac >= 1.0:
                ev.done = True

    # -- one control tick -----------------------------------------------------
    def _environment_wrench(self, t, include_injected=True):
        total = self._injected.copy() if include_injected else np.zeros(6)
        for c in self.contacts:
            total += c.wrench(self.pose, t)
        return total

    def _measure(self, raw):
        meas = raw
        if np.any(self.config.noise_std > 0.0):
            meas = meas + self.rng.normal(0.0, self.config.noise_std)
        if self.config.lowpass_tau > 0.0:
            if self._filter_state is None:
                self._filter_state = meas.copy()
            else:
                blend = 1.0 - math.exp(-self._dt / self.config.lowpass_tau)
                self._filter_state = self._filter_state + blend * (meas - self._filter_state)
            meas = self._filter_state.copy()
        return meas

    def tick(self):
        """Run one control tick and integrate the plant to the next one.

        Returns the recorded row as a dict of scalars/arrays (state at the
        tick's timestamp, i.e. before this tick's motion).
        """
        t = self.tick_index / self.config.control_rate
        if self.tick_index == 0 and self.bias is None:
            # null the pre-load exactly as a hardware zeroing step would:
            # sample the sensor once before anything is allowed to change,
            # with nobody pushing on the robot
            self.bias = (
                self._measure(self._environment_wrench(t, include_injected=False))
                if self.config.bias_compensation
                else np.zeros(6)
            )
        self._apply_events(t)
        raw = self._environment_wrench(t)
        compensated = self._measure(raw) - self.bias

        error = pose_error(self.pose, self.desired_pose)
        if self.config.controller == "wrench_qp":
            cmd = compute_command(compensated, error, self.controller_params)
            twist, gamma, status = cmd.twist, cmd.slack, cmd.qp.status
            margins = margin(compensated, self.controller_params.wrench_limits)
        else:
            twist = admittance_command(compensated, error, self.controller_params)
            gamma, status = 0.0, "admittance"
            limits = self.config.report_limits
            margins = margin(compensated, limits) if limits is not None else np.full(6, np.nan)

        row = {
            "t": t,
            "pose": np.concatenate([self.pose.position, self.pose.orientation]),
            "twist": twist.copy(),
            "wrench": compensated.copy(),
            "raw_wrench": raw.copy(),
            "margins": margins.copy(),
            "gamma": float(gamma),
            "status": status,
        }

        # hold the twist and integrate plant substeps up to the next tick
        interval = self._dt
        sub = 1.0 / self.config.plant_rate
        steps, rem = divmod(interval + 1e-15, sub)
        for _ in range(int(steps)):
            self.pose = integrate_pose(self.pose, twist, sub)
        if rem > 1e-12:
            self.pose = integrate_pose(self.pose, twist, rem)

        self.tick_index += 1
        return row


def run_scenario(config: SimConfig) -> Trace:
    """Run the whole configured episode and collect the trace."""
    engine = SimulationEngine(config)
    n_ticks = int(round(config.duration * config.control_rate))
    if n_ticks < 1:
        raise ValueError("duration shorter than one control tick")
    rows = [engine.tick() for _ in range(n_ticks)]
    return Trace(
        t=np.array([r["t"] for r in rows]),
        pose=np.array([r["pose"] for r in rows]),
        twist=np.array([r["twist"] for r in rows]),
        wrench=np.array([r["wrench"] for r in rows]),
        raw_wrench=np.array([r["raw_wrench"] for r in rows]),
        margins=np.array([r["margins"] for r in rows]),
        gamma=np.array([r["gamma"] for r in rows]),
        status=[r["status"] for r in rows],
    )


def _fmt(x):
    return repr(float(x))


def trace_to_csv(trace: Trace) -> str:
    lines = [TRACE_HEADER]
    for i in range(len(trace)):
        cells = (
            [_fmt(trace.t[i])]
            + [_fmt(v) for v in trace.pose[i]]
            + [_fmt(v) for v in trace.twist[i]]
            + [_fmt(v) for v in trace.wrench[i]]
            + [_fmt(v) for v in trace.margins[i]]
            + [_fmt(trace.gamma[i]), trace.status[i]]
        )
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def raw_trace_to_csv(trace: Trace) -> str:
    lines = [RAW_TRACE_HEADER]
    for i in range(len(trace)):
        lines.append(",".join([_fmt(trace.t[i])] + [_fmt(v) for v in trace.raw_wrench[i]]))
    return "\n".join(lines) + "\n"


def write_trace(trace: Trace, path, raw_path=None):
    with open(path, "w") as f:
        f.write(trace_to_csv(trace))
    if raw_path is not None:
        with open(raw_path, "w") as f:
            f.write(raw_trace_to_csv(trace))


def read_trace(path) -> Trace:
    """Read back a trace CSV (raw wrench column block is not part of the file)."""
    with open(path) as f:
        header = f.readline().strip()
        if header != TRACE_HEADER:
            raise ValueError("not a trace file: header mismatch")
        rows = [line.rstrip("\n").split(",") for line in f if line.strip()]
    data = np.array([[float(v) for v in r[:-1]] for r in rows])
    return Trace(
        t=data[:, 0],
        pose=data[:, 1:8],
        twist=data[:, 8:14],
        wrench=data[:, 14:20],
        raw_wrench=np.full((len(rows), 6), np.nan),
        margins=data[:, 20:26],
        gamma=data[:, 26],
        status=[r[-1] for r in rows],
    )


def summarize(trace: Trace, limits=None, desired_pose: Pose = None) -> dict:
    """Deterministic scalar metrics recomputed from a trace.

    limits : per-axis wrench limits to score violations against (optional).
    desired_pose : target used for the final tracking-error metrics (optional).
    """
    out = {
        "ticks": int(len(trace)),
        "duration": float(trace.t[-1] - trace.t[0]) + float(trace.t[1] - trace.t[0] if len(trace) > 1 else 0.0),
        "max_abs_wrench": np.max(np.abs(trace.wrench), axis=0).tolist(),
        "max_gamma": float(np.max(trace.gamma)),
        "min_position_z": float(np.min(trace.pose[:, 2])),
    }
    if limits is not None:
        lim = np.broadcast_to(np.asarray(limits, dtype=float), (6,))
        excess = np.abs(trace.wrench) - lim
        out["worst_violation_abs"] = float(max(0.0, np.max(excess)))
        out["worst_violation_frac"] = float(max(0.0, np.max(excess / lim)))
        out["violating_tick_fraction"] = float(np.mean(np.any(excess > 0.0, axis=1)))
    if desired_pose is not None:
        final = Pose(trace.pose[-1, :3], trace.pose[-1, 3:])
        err = pose_error(final, desired_pose)
        out["final_error"] = err.tolist()
        out["final_error_norm"] = float(np.linalg.norm(err))
    return out
