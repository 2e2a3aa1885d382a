import json
import subprocess
import sys
from pathlib import Path

import pytest

from wrenchguard.cli import EXIT_CONFIG, EXIT_INVALID, EXIT_OK, EXIT_RUNTIME, apply_override, main
from wrenchguard.cli import ConfigError
from wrenchguard.simulate import TRACE_HEADER, read_trace

SCENARIO_DIR = Path(__file__).resolve().parent.parent / "scenarios"


def _run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_run_builtin_writes_trace(tmp_path, capsys):
    out = tmp_path / "trace.csv"
    code, stdout, _ = _run(
        ["run", "bag_test", "--out", str(out), "--set", "duration=2.0"], capsys
    )
    assert code == EXIT_OK
    assert out.exists()
    assert out.read_text().splitlines()[0] == TRACE_HEADER
    report = json.loads(stdout)
    assert report["scenario"] == "bag_test"
    assert report["ticks"] == 60
    assert "worst_violation_frac" in report


def test_run_scenario_file_path(tmp_path, capsys):
    code, stdout, _ = _run(
        ["run", str(SCENARIO_DIR / "human_guide.json"), "--out", str(tmp_path / "t.csv"),
         "--set", "duration=1.0"],
        capsys,
    )
    assert code == EXIT_OK
    assert json.loads(stdout)["scenario"] == "human_guide"


def test_run_verbose_writes_raw_companion(tmp_path, capsys):
    out = tmp_path / "trace.csv"
    code, stdout, _ = _run(
        ["run", "bag_test", "--out", str(out), "--set", "duration=1.0", "--verbose"], capsys
    )
    assert code == EXIT_OK
    report = json.loads(stdout)
    raw = Path(report["raw_trace"])
    assert raw == tmp_path / "trace_raw.csv"
    assert raw.exists()


def test_run_unknown_scenario_is_config_error(tmp_path, capsys):
    code, _, stderr = _run(["run", "no_such_thing", "--out", str(tmp_path / "t.csv")], capsys)
    assert code == EXIT_CONFIG
    assert "no such scenario" in stderr


def test_run_bad_set_key_is_config_error(tmp_path, capsys):
    code, _, stderr = _run(
        ["run", "bag_test", "--out", str(tmp_path / "t.csv"), "--set", "durationn=2.0"], capsys
    )
    assert code == EXIT_CONFIG
    assert "durationn" in stderr
    code2, _, stderr2 = _run(
        ["run", "bag_test", "--out", str(tmp_path / "t.csv"), "--set", "duration"], capsys
    )
    assert code2 == EXIT_CONFIG
    assert "key=value" in stderr2


def test_run_invalid_override_value_is_config_error(tmp_path, capsys):
    code, _, stderr = _run(
        ["run", "bag_test", "--out", str(tmp_path / "t.csv"), "--set", "duration=-3"], capsys
    )
    assert code == EXIT_CONFIG
    assert "duration" in stderr


def test_runtime_fault_exit_code(tmp_path, capsys):
    # structurally valid config whose event targets a contact that is absent:
    # the fault surfaces mid-run, not at validation time
    scenario = {
        "duration": 1.0,
        "controller": {"type": "wrench_qp"},
        "events": [{"time": 0.5, "set": {"contacts[2].mass": 1.0}}],
    }
    p = tmp_path / "fault.json"
    p.write_text(json.dumps(scenario))
    code, _, stderr = _run(["run", str(p), "--out", str(tmp_path / "t.csv")], capsys)
    assert code == EXIT_RUNTIME
    assert "runtime fault" in stderr


def test_seed_flag_changes_noisy_run(tmp_path, capsys):
    args = ["run", "bag_test", "--set", "duration=1.0", "--set", "noise_std=0.2"]
    a, b, c = tmp_path / "a.csv", tmp_path / "b.csv", tmp_path / "c.csv"
    assert _run(args + ["--out", str(a), "--seed", "1"], capsys)[0] == EXIT_OK
    assert _run(args + ["--out", str(b), "--seed", "1"], capsys)[0] == EXIT_OK
    assert _run(args + ["--out", str(c), "--seed", "2"], capsys)[0] == EXIT_OK
    assert a.read_text() == b.read_text()
    assert a.read_text() != c.read_text()


def test_sweep_grid(tmp_path, capsys):
    out_dir = tmp_path / "sweep"
    code, stdout, _ = _run(
        [
            "sweep", "bag_test", "--set", "duration=1.0",
            "--grid", "controller.clf_rate=[5,10]",
            "--grid", "controller.slack_weight=[1,2]",
            "--out-dir", str(out_dir),
        ],
        capsys,
    )
    assert code == EXIT_OK
    report = json.loads(stdout)
    assert report["cells"] == 4
    traces = sorted(out_dir.glob("cell_*_trace.csv"))
    assert len(traces) == 4
    table = (out_dir / "sweep_summary.csv").read_text().splitlines()
    assert len(table) == 5  # header + 4 cells
    header = table[0].split(",")
    assert "controller.clf_rate" in header and "final_error_norm" in header
    # each cell trace parses as a trace file
    read_trace(traces[0])


def test_sweep_bad_grid_is_config_error(tmp_path, capsys):
    code, _, stderr = _run(
        ["sweep", "bag_test", "--grid", "controller.clf_rate=5", "--out-dir", str(tmp_path)],
        capsys,
    )
    assert code == EXIT_CONFIG
    assert "JSON list" in stderr


def test_validate_ok_and_failures(tmp_path, capsys):
    good = SCENARIO_DIR / "bag_test.json"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"duration": 5.0, "controller": {"type": "quantum"}}))
    worse = tmp_path / "worse.json"
    worse.write_text("{broken")
    code, stdout, _ = _run(["validate", str(good), str(bad), str(worse), "interactive"], capsys)
    assert code == EXIT_INVALID
    lines = stdout.splitlines()
    assert lines[0].startswith("OK")
    assert lines[1].startswith("FAIL") and "quantum" in lines[1]
    assert lines[2].startswith("FAIL")
    assert lines[3].startswith("OK")


def test_validate_json_report(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"controller": {"type": "wrench_qp"}}))  # missing duration
    code, stdout, _ = _run(["validate", "bag_test", str(bad), "--json"], capsys)
    assert code == EXIT_INVALID
    report = json.loads(stdout)
    assert report["results"][0]["ok"] is True
    assert report["results"][1]["ok"] is False
    assert "duration" in report["results"][1]["error"]


def test_validate_all_good_exits_zero(capsys):
    code, _, _ = _run(["validate", "bag_test", "human_guide", "interactive"], capsys)
    assert code == EXIT_OK


def test_apply_override_paths():
    d = {"a": {"b": [1, 2, {"c": 3}]}, "top": 0}
    apply_override(d, "top", 9)
    assert d["top"] == 9
    apply_override(d, "a.b[1]", 5)
    assert d["a"]["b"][1] == 5
    apply_override(d, "a.b[2].c", 7)
    assert d["a"]["b"][2]["c"] == 7
    with pytest.raises(ConfigError):
        apply_override(d, "a.zzz", 1)
    with pytest.raises(ConfigError):
        apply_override(d, "a.b[9]", 1)
    with pytest.raises(ConfigError):
        apply_override(d, "a..b", 1)


def test_console_entry_point(tmp_path):
    # the installed script must answer --help without importing server extras
    proc = subprocess.run(
        [sys.executable, "-m", "wrenchguard.cli", "--help"],
        capture_output=True, text=True, timeout=60,
    )
    assert proc.returncode == 0
    for word in ("run", "sweep", "validate", "serve"):
        assert word in proc.stdout
