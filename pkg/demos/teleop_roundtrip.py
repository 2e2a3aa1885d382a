"""
Teleop service round trip: drive, record, replay
================================================

Starts the websocket service on a free port (real-time pacing, so this
demo takes ~4 s of wall clock), connects a scripted client that drags the
arm sideways with a ramping 15 N wrench against a 10 N limit, then replays
the recording offline and checks the traces match byte for byte.

Run:  python demos/teleop_roundtrip.py
"""

import json
import pathlib
import socket
import tempfile
import threading
import time

import numpy as np
import uvicorn
from websockets.sync.client import connect as ws_connect

from wrenchguard import (
    BUILTIN_SCENARIOS,
    TeleopSession,
    build_app,
    config_from_dict,
    replay_recording,
    trace_to_csv,
)

scenario = BUILTIN_SCENARIOS["interactive"]()
scenario["duration"] = 4.0
session = TeleopSession(config_from_dict(scenario))

record_dir = pathlib.Path(tempfile.mkdtemp(prefix="teleop_demo_"))
app = build_app(session, record_dir=record_dir, scenario_dict=scenario)

with socket.socket() as s:
    s.bind(("127.0.0.1", 0))
    port = s.getsockname()[1]
server = uvicorn.Server(uvicorn.Config(app, host="127.0.0.1", port=port, log_level="warning"))
threading.Thread(target=server.run, daemon=True).start()
while not server.started:
    time.sleep(0.01)

peak = 0.0
with ws_connect(f"ws://127.0.0.1:{port}/ws", open_timeout=10) as ws:
    hello = json.loads(ws.recv(timeout=10))
    print("server hello: limits", hello["limits"][:3], "envelope", hello["envelope"][:3])
    seq = 0
    last = None
    while True:
        msg = json.loads(ws.recv(timeout=10))
        if msg["type"] != "state":
            continue
        last = msg
        peak = max(peak, abs(msg["compensated_wrench"][0]))
        if msg["tick"] >= session.max_steps - 1:
            break
        drag = 15.0 * min(msg["t"] / 1.5, 1.0)  # ramp like a pointer drag
        seq += 1
        ws.send(json.dumps({
            "type": "command", "v": 1, "kind": "apply_wrench",
            "payload": {"wrench": [drag, 0, 0, 0, 0, 0]},
            "client_id": "demo", "sequence_number": seq,
        }))

server.should_exit = True
time.sleep(0.5)  # let the shutdown hook flush the recording

print("requested 15 N against a 10 N limit; peak sensed |fx| = %.2f N" % peak)
print("final margin (fx): %.2f" % last["per_axis_margin"][0])

# Replay the recording and compare byte for byte.
replayed = replay_recording(record_dir)
recorded_csv = (record_dir / "trace.csv").read_text()
print("recording at", record_dir)
print("commands logged:", sum(1 for _ in (record_dir / "commands.jsonl").open()))
print("replay identical:", trace_to_csv(replayed) == recorded_csv)
print("peak replayed |fx|: %.2f N" % np.abs(replayed.wrench[:, 0]).max())
