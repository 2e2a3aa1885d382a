"""Scenario definitions: JSON-friendly dicts in, validated SimConfig out.

The dict schema is strict -- unknown keys anywhere are rejected with a message
naming the offending key, so a typo in a config file or a `--set` override
fails loudly instead of silently running something else.
"""

from __future__ import annotations

import json

import numpy as np

from .admittance import AdmittanceParams
from .contacts import GRAVITY, HangingLoad, HumanGuide, SpringContact
from .controller import ControllerParams
from .geometry import Pose
from .simulate import SimConfig

_TOP_KEYS = {
    "name", "duration", "control_rate", "plant_rate", "seed", "noise_std",
    "bias_compensation", "lowpass_tau", "controller", "report_limits",
    "contacts", "initial_pose", "desired_pose", "events",
}


def _reject_extra(d, allowed, where):
    extra = set(d) - allowed
    if extra:
        raise ValueError(f"unknown key(s) {sorted(extra)} in {where}")


def _pose_from_dict(d, where):
    if not isinstance(d, dict):
        raise ValueError(f"{where} must be an object")
    _reject_extra(d, {"position", "orientation_wxyz"}, where)
    try:
        return Pose(
            d.get("position", [0.0, 0.0, 0.0]),
            d.get("orientation_wxyz", [1.0, 0.0, 0.0, 0.0]),
        )
    except Exception as exc:
        raise ValueError(f"bad pose in {where}: {exc}") from exc


def _controller_from_dict(d):
    if not isinstance(d, dict) or "type" not in d:
        raise ValueError("controller must be an object with a 'type'")
    kind = d["type"]
    if kind == "wrench_qp":
        _reject_extra(d, {"type", "wrench_limits", "clf_rate", "slack_weight", "cbf_rate"}, "controller")
        kwargs = {k: d[k] for k in ("wrench_limits", "clf_rate", "slack_weight", "cbf_rate") if k in d}
        return "wrench_qp", ControllerParams(**kwargs)
    if kind == "admittance":
        _reject_extra(d, {"type", "stiffness", "damping"}, "controller")
        kwargs = {k: d[k] for k in ("stiffness", "damping") if k in d}
        return "admittance", AdmittanceParams(**kwargs)
    raise ValueError(f"unknown controller type {kind!r}")


def _contact_from_dict(d, idx):
    where = f"contacts[{idx}]"
    if not isinstance(d, dict) or "type" not in d:
        raise ValueError(f"{where} must be an object with a 'type'")
    kind = d["type"]
    if kind == "spring":
        _reject_extra(d, {"type", "anchor", "stiffness"}, where)
        return SpringContact(
            anchor=_pose_from_dict(d.get("anchor", {}), f"{where}.anchor"),
            stiffness=d.get("stiffness", 0.0),
        )
    if kind == "hanging_load":
        _reject_extra(d, {"type", "mass", "rope_attach_offset", "ground_height", "ground_stiffness"}, where)
        kwargs = {k: d[k] for k in ("mass", "rope_attach_offset", "ground_height", "ground_stiffness") if k in d}
        return HangingLoad(**kwargs)
    if kind == "human_guide":
        _reject_extra(d, {"type", "waypoints", "grip_stiffness"}, where)
        wps = d.get("waypoints", [])
        if not isinstance(wps, list):
            raise ValueError(f"{where}.waypoints must be a list")
        parsed = []
        for j, wp in enumerate(wps):
            if not isinstance(wp, dict):
                raise ValueError(f"{where}.waypoints[{j}] must be an object")
            _reject_extra(wp, {"time", "pose"}, f"{where}.waypoints[{j}]")
            if "time" not in wp or "pose" not in wp:
                raise ValueError(f"{where}.waypoints[{j}] needs 'time' and 'pose'")
            parsed.append((float(wp["time"]), _pose_from_dict(wp["pose"], f"{where}.waypoints[{j}].pose")))
        kwargs = {"waypoints": parsed}
        if "grip_stiffness" in d:
            kwargs["grip_stiffness"] = d["grip_stiffness"]
        return HumanGuide(**kwargs)
    raise ValueError(f"unknown contact type {kind!r}")


def config_from_dict(d: dict) -> SimConfig:
    """Validate a scenario dict and build the typed config. Raises ValueError."""
    if not isinstance(d, dict):
        raise ValueError("scenario must be a JSON object")
    _reject_extra(d, _TOP_KEYS, "scenario")
    if "duration" not in d:
        raise ValueError("scenario needs a 'duration'")
    controller, params = _controller_from_dict(d.get("controller", {"type": "wrench_qp"}))
    contacts = [_contact_from_dict(c, i) for i, c in enumerate(d.get("contacts", []))]
    kwargs = dict(
        duration=d["duration"],
        controller=controller,
        controller_params=params,
        contacts=contacts,
        initial_pose=_pose_from_dict(d.get("initial_pose", {}), "initial_pose"),
        desired_pose=_pose_from_dict(d.get("desired_pose", {}), "desired_pose"),
        events=d.get("events", []),
    )
    for key in ("control_rate", "plant_rate", "seed", "noise_std", "bias_compensation", "lowpass_tau", "report_limits"):
        if key in d:
            kwargs[key] = d[key]
    try:
        return SimConfig(**kwargs)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"invalid scenario: {exc}") from exc


def load_scenario(path) -> dict:
    with open(path) as f:
        try:
            d = json.load(f)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(d, dict):
        raise ValueError(f"{path}: scenario must be a JSON object")
    return d


# ---------------------------------------------------------------------------
# Built-in scenarios.  The JSON files under scenarios/ are generated from
# these builders; a test pins them against each other so they cannot drift.
# ---------------------------------------------------------------------------

_HOME = {"position": [0.5, -0.3, 1.0]}


def _base(name, duration):
    """Top-level defaults, spelled out so every key is override-reachable."""
    return {
        "name": name,
        "duration": duration,
        "control_rate": 30.0,
        "plant_rate": 1000.0,
        "seed": 0,
        "noise_std": 0.0,
        "bias_compensation": True,
        "lowpass_tau": 0.0,
        "events": [],
    }


def bag_test() -> dict:
    """Hanging-load episode: hold empty, take 20 N, overload past the 25 N limit.

    The overload phase uses a weight 2% above the limit; a load exactly at the
    limit is a fixed point of the closed loop (zero commanded descent), while
    any excess drives a steady lowering motion until the ground takes the
    weight.
    """
    return {
        **_base("bag_test", 30.0),
        "initial_pose": _HOME,
        "desired_pose": _HOME,
        "controller": {
            "type": "wrench_qp",
            "wrench_limits": [25.0, 25.0, 25.0, 10.0, 10.0, 10.0],
            "clf_rate": 10.0,
            "slack_weight": 1.0,
            "cbf_rate": 1.0,
        },
        "contacts": [
            {
                "type": "hanging_load",
                "mass": 0.0,
                "ground_height": 0.2,
                "ground_stiffness": 2000.0,
            }
        ],
        "events": [
            {"time": 10.0, "set": {"contacts[0].mass": 20.0 / GRAVITY}},
            {"time": 17.0, "set": {"contacts[0].mass": 25.5 / GRAVITY}},
        ],
    }


def stiffness_comparison() -> dict:
    """The same loading schedule under the fixed-gain admittance baseline.

    The baseline complies (so nothing breaks) but its settling offset tracks
    the wrench without bound, and nothing caps the sensed force.
    """
    d = bag_test()
    d["name"] = "stiffness_comparison"
    d["controller"] = {"type": "admittance", "stiffness": 40.0, "damping": 100.0}
    d["report_limits"] = [25.0, 25.0, 25.0, 10.0, 10.0, 10.0]
    return d


def human_guide() -> dict:
    """Hand-over-hand guiding toward a known drop-off point.

    The robot knows the destination; the operator's compliant grip steers the
    path. The tracking term races ahead until the grip force hits its limit,
    so the x-axis barrier stays active for most of the traverse.
    """
    end = {"position": [1.7, -0.3, 1.0]}
    return {
        **_base("human_guide", 30.0),
        "initial_pose": _HOME,
        "desired_pose": end,
        "controller": {
            "type": "wrench_qp",
            "wrench_limits": [10.0, 10.0, 10.0, 0.5, 3.0, 3.0],
            "clf_rate": 10.0,
            "slack_weight": 1.0,
            "cbf_rate": [1.0, 1.0, 1.0, 10.0, 10.0, 10.0],
        },
        "contacts": [
            {
                "type": "human_guide",
                "grip_stiffness": [40.0, 40.0, 40.0, 2.0, 2.0, 2.0],
                "waypoints": [
                    {"time": 2.0, "pose": _HOME},
                    {"time": 26.0, "pose": end},
                ],
            }
        ],
    }


def interactive() -> dict:
    """Default config for the teleoperation service: a soft spring workspace.

    Client wrenches add to the spring; the robot yields along any axis whose
    sensed wrench approaches its limit.
    """
    return {
        **_base("interactive", 3600.0),
        "initial_pose": _HOME,
        "desired_pose": _HOME,
        "controller": {
            "type": "wrench_qp",
            "wrench_limits": [10.0, 10.0, 10.0, 3.0, 3.0, 3.0],
            "clf_rate": 10.0,
            "slack_weight": 1.0,
            "cbf_rate": [1.0, 1.0, 1.0, 10.0, 10.0, 10.0],
        },
        "contacts": [
            {
                "type": "spring",
                "anchor": _HOME,
                "stiffness": [50.0, 50.0, 50.0, 2.0, 2.0, 2.0],
            }
        ],
    }


BUILTIN_SCENARIOS = {
    "bag_test": bag_test,
    "stiffness_comparison": stiffness_comparison,
    "human_guide": human_guide,
    "interactive": interactive,
}
