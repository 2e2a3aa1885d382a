import json
from pathlib import Path

import numpy as np
import pytest

from wrenchguard.contacts import HangingLoad, HumanGuide, SpringContact
from wrenchguard.scenarios import BUILTIN_SCENARIOS, config_from_dict, load_scenario

SCENARIO_DIR = Path(__file__).resolve().parent.parent / "scenarios"


def test_builtins_build_valid_configs():
    for name, builder in BUILTIN_SCENARIOS.items():
        config = config_from_dict(builder())
        assert config.duration > 0.0, name


def test_json_files_match_builders():
    # the committed files are the public artifacts; they must not drift from
    # the builders the tests and CLI use
    for name, builder in BUILTIN_SCENARIOS.items():
        path = SCENARIO_DIR / f"{name}.json"
        assert path.exists(), f"missing scenario file {path}"
        assert json.loads(path.read_text()) == builder()


def test_bag_test_structure():
    d = BUILTIN_SCENARIOS["bag_test"]()
    cfg = config_from_dict(d)
    assert isinstance(cfg.contacts[0], HangingLoad)
    assert np.allclose(cfg.controller_params.wrench_limits, [25, 25, 25, 10, 10, 10])
    times = [e["time"] for e in d["events"]]
    assert times == [10.0, 17.0]
    # second phase hangs exactly 20 N, third 25.5 N (2% past the limit)
    assert d["events"][0]["set"]["contacts[0].mass"] * 9.81 == pytest.approx(20.0)
    assert d["events"][1]["set"]["contacts[0].mass"] * 9.81 == pytest.approx(25.5)


def test_comparison_shares_bag_schedule():
    bag = BUILTIN_SCENARIOS["bag_test"]()
    cmp_ = BUILTIN_SCENARIOS["stiffness_comparison"]()
    assert cmp_["events"] == bag["events"]
    assert cmp_["contacts"] == bag["contacts"]
    assert cmp_["controller"]["type"] == "admittance"
    cfg = config_from_dict(cmp_)
    assert np.allclose(cfg.report_limits, [25, 25, 25, 10, 10, 10])


def test_human_guide_structure():
    cfg = config_from_dict(BUILTIN_SCENARIOS["human_guide"]())
    guide = cfg.contacts[0]
    assert isinstance(guide, HumanGuide)
    # guide terminus and robot target coincide: the drop-off is known
    assert np.allclose(guide.waypoints[-1][1].position, cfg.desired_pose.position)
    # torque barriers decay an order of magnitude faster than force ones
    assert np.allclose(cfg.controller_params.cbf_rate, [1, 1, 1, 10, 10, 10])


def test_interactive_structure():
    cfg = config_from_dict(BUILTIN_SCENARIOS["interactive"]())
    assert isinstance(cfg.contacts[0], SpringContact)
    assert np.allclose(cfg.controller_params.wrench_limits[:3], 10.0)


def test_load_scenario_round_trip(tmp_path):
    d = BUILTIN_SCENARIOS["bag_test"]()
    p = tmp_path / "s.json"
    p.write_text(json.dumps(d))
    assert load_scenario(p) == d


def test_unknown_top_level_key_rejected():
    d = BUILTIN_SCENARIOS["bag_test"]()
    d["durations"] = 5.0
    with pytest.raises(ValueError, match="durations"):
        config_from_dict(d)


def test_unknown_controller_key_rejected():
    d = BUILTIN_SCENARIOS["bag_test"]()
    d["controller"]["wrench_limit"] = 5.0
    with pytest.raises(ValueError, match="wrench_limit"):
        config_from_dict(d)


def test_unknown_contact_type_rejected():
    d = BUILTIN_SCENARIOS["bag_test"]()
    d["contacts"][0]["type"] = "magnet"
    with pytest.raises(ValueError, match="magnet"):
        config_from_dict(d)


def test_bad_pose_rejected():
    d = BUILTIN_SCENARIOS["bag_test"]()
    d["initial_pose"] = {"position": [1.0, 2.0]}
    with pytest.raises(ValueError, match="initial_pose"):
        config_from_dict(d)
    d["initial_pose"] = {"location": [0, 0, 0]}
    with pytest.raises(ValueError, match="location"):
        config_from_dict(d)


def test_missing_duration_rejected():
    with pytest.raises(ValueError, match="duration"):
        config_from_dict({"controller": {"type": "wrench_qp"}})


def test_non_object_scenarios_rejected(tmp_path):
    with pytest.raises(ValueError):
        config_from_dict([1, 2, 3])
    p = tmp_path / "arr.json"
    p.write_text("[1, 2, 3]")
    with pytest.raises(ValueError):
        load_scenario(p)
    p2 = tmp_path / "broken.json"
    p2.write_text("{not json")
    with pytest.raises(ValueError):
        load_scenario(p2)


def test_waypoint_errors_surface():
    d = BUILTIN_SCENARIOS["human_guide"]()
    d["contacts"][0]["waypoints"][0]["time"] = 99.0  # now out of order
    with pytest.raises(ValueError):
        config_from_dict(d)
    d2 = BUILTIN_SCENARIOS["human_guide"]()
    d2["contacts"][0]["waypoints"] = [{"pose": {"position": [0, 0, 0]}}]
    with pytest.raises(ValueError, match="time"):
        config_from_dict(d2)


def test_invalid_parameter_values_rejected():
    d = BUILTIN_SCENARIOS["bag_test"]()
    d["controller"]["clf_rate"] = -1.0
    with pytest.raises(ValueError):
        config_from_dict(d)
    d2 = BUILTIN_SCENARIOS["bag_test"]()
    d2["duration"] = -5.0
    with pytest.raises(ValueError):
        config_from_dict(d2)
