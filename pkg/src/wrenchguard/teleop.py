"""Interactive teleoperation bridge: WebSocket state stream + command channel.

Protocol (JSON, schema version 1).  Server messages:

* ``hello``  -- sent once per connection: advertises the per-axis wrench
  envelope a client may inject, the active limits, and the control rate.
* ``state``  -- one per control tick: pose, compensated wrench, per-axis
  margins, limits, slack and QP status.
* ``error``  -- reply to a malformed or rejected command; the session ticks on.

Client messages are commands::

    {"type": "command", "v": 1, "kind": K, "payload": {...},
     "client_id": "...", "sequence_number": n}

with kind one of apply_wrench / set_target / set_limits / pause / reset.
Commands take effect at the next tick boundary.  Per client the newest
apply_wrench wins within a tick; contributions from different clients sum and
are clamped to the advertised envelope server-side.  Stale or duplicated
sequence numbers are dropped per client.

The session core is synchronous and deterministic: a recording (trace +
command log with effect steps) replays to a byte-identical trace.
"""

from __future__ import annotations

import asyncio
import json
import os
import time
from contextlib import asynccontextmanager

import numpy as np
from fastapi import FastAPI, WebSocket, WebSocketDisconnect

from .geometry import Pose
from .simulate import SimConfig, SimulationEngine, Trace, trace_to_csv
from .scenarios import config_from_dict

PROTOCOL_VERSION = 1
COMMAND_KINDS = ("apply_wrench", "set_target", "set_limits", "pause", "reset")


class CommandError(ValueError):
    """Raised (and replied as an error message) for rejected commands."""


def _require(cond, message):
    if not cond:
        raise CommandError(message)


def _parse_pose(payload) -> Pose:
    _require(isinstance(payload, dict), "set_target payload must be an object")
    pose = payload.get("pose")
    _require(isinstance(pose, dict), "set_target payload needs a 'pose' object")
    _require(set(pose) <= {"position", "orientation_wxyz"}, "pose keys: position, orientation_wxyz")
    try:
        return Pose(
            pose.get("position", [0.0, 0.0, 0.0]),
            pose.get("orientation_wxyz", [1.0, 0.0, 0.0, 0.0]),
        )
    except (ValueError, TypeError) as exc:
        raise CommandError(f"bad pose: {exc}") from exc


def _parse_vector6(value, what):
    try:
        arr = np.asarray(value, dtype=float).reshape(6)
    except (ValueError, TypeError) as exc:
        raise CommandError(f"{what} must be a list of 6 numbers") from exc
    _require(bool(np.all(np.isfinite(arr))), f"{what} must be finite")
    return arr


class TeleopSession:
    """Deterministic session core; the server drives it, tests drive it directly."""

    def __init__(self, config: SimConfig, envelope=None):
        if config.controller != "wrench_qp":
            raise ValueError("teleoperation requires the wrench_qp controller")
        self.config = config
        if envelope is None:
            envelope = 2.0 * config.controller_params.wrench_limits
        self.envelope = np.asarray(envelope, dtype=float).reshape(6)
        if np.any(self.envelope <= 0.0):
            raise ValueError("envelope must be positive")
        self.max_steps = int(round(config.duration * config.control_rate))
        self.step = 0  # monotone advance_tick() call counter
        self.paused = False
        self.rows = []
        self.command_log = []  # accepted commands with their effect step
        self._wrenches = {}  # client_id -> latched clamped wrench
        self._last_seq = {}
        self._staged_ops = []  # (kind, parsed_value) applied at the next tick
        self._engine = SimulationEngine(config)

    # -- command intake -------------------------------------------------------
    def submit(self, client_id: str, message: dict):
        """Validate and stage one command; raises CommandError on rejection."""
        _require(isinstance(message, dict), "command must be a JSON object")
        _require(message.get("type") == "command", "message type must be 'command'")
        _require(message.get("v") == PROTOCOL_VERSION, f"unsupported schema version {message.get('v')!r}")
        kind = message.get("kind")
        _require(kind in COMMAND_KINDS, f"unknown command kind {kind!r}")
        payload = message.get("payload", {})
        _require(isinstance(payload, dict), "payload must be an object")
        client = message.get("client_id", client_id)
        _require(isinstance(client, str) and client, "client_id must be a non-empty string")
        seq = message.get("sequence_number")
        if seq is not None:
            _require(isinstance(seq, int) and seq >= 0, "sequence_number must be a nonnegative integer")

        # validate the payload fully before the command can consume its
        # sequence number or touch any state
        if kind == "apply_wrench":
            wrench = _parse_vector6(payload.get("wrench"), "wrench")
            clamped = np.clip(wrench, -self.envelope, self.envelope)
            stage = lambda: self._wrenches.__setitem__(client, clamped)  # latest per client wins
            recorded = {"wrench": clamped.tolist()}
        elif kind == "set_target":
            pose = _parse_pose(payload)
            stage = lambda: self._staged_ops.append(("set_target", pose))
            recorded = {"pose": {"position": pose.position.tolist(),
                                 "orientation_wxyz": pose.orientation.tolist()}}
        elif kind == "set_limits":
            limits = _parse_vector6(payload.get("limits"), "limits")
            _require(bool(np.all(limits > 0.0)), "limits must be positive")
            stage = lambda: self._staged_ops.append(("set_limits", limits))
            recorded = {"limits": limits.tolist()}
        elif kind == "pause":
            paused = payload.get("paused")
            _require(isinstance(paused, bool), "pause payload needs boolean 'paused'")
            stage = lambda: self._staged_ops.append(("pause", paused))
            recorded = {"paused": paused}
        else:  # reset
            stage = lambda: self._staged_ops.append(("reset", None))
            recorded = {}

        if seq is not None:
            last = self._last_seq.get(client)
            if last is not None and seq <= last:
                return  # stale or duplicated; silently dropped
            self._last_seq[client] = seq
        stage()
        self.command_log.append(
            {"effect_step": self.step, "client_id": client, "kind": kind, "payload": recorded}
        )

    def drop_client(self, client_id: str):
        """A disconnected client must stop pushing: latch its wrench to zero."""
        if client_id in self._wrenches and np.any(self._wrenches[client_id] != 0.0):
            self._wrenches[client_id] = np.zeros(6)
            self.command_log.append(
                {"effect_step": self.step, "client_id": client_id,
                 "kind": "apply_wrench", "payload": {"wrench": [0.0] * 6}}
            )

    # -- one step ---------------------------------------------------------------
    def advance_tick(self):
        """Apply staged commands, run one tick unless paused; returns the state
        message to broadcast (None when paused or finished)."""
        if self.finished:
            return None
        for kind, value in self._staged_ops:
            if kind == "set_target":
                self._engine.set_desired_pose(value)
            elif kind == "set_limits":
                self._engine.set_wrench_limits(value)
            elif kind == "pause":
                self.paused = value
            elif kind == "reset":
                self._engine = SimulationEngine(self.config)
                self._wrenches = {}
                self.paused = False
        self._staged_ops = []
        message = None
        if not self.paused:
            total = np.zeros(6)
            for w in self._wrenches.values():
                total += w
            self._engine.set_injected_wrench(np.clip(total, -self.envelope, self.envelope))
            row = self._engine.tick()
            self.rows.append(row)
            message = self._state_message(row)
        self.step += 1
        return message

    @property
    def finished(self) -> bool:
        return self.step >= self.max_steps

    @property
    def limits(self):
        return self._engine.controller_params.wrench_limits

    def hello_message(self):
        return {
            "type": "hello",
            "v": PROTOCOL_VERSION,
            "envelope": self.envelope.tolist(),
            "limits": self.limits.tolist(),
            "control_rate": self.config.control_rate,
            "tick": self.step,
        }

    def _state_message(self, row):
        return {
            "type": "state",
            "v": PROTOCOL_VERSION,
            "tick": self.step,
            "t": row["t"],
            "pose": {
                "position": row["pose"][:3].tolist(),
                "orientation_wxyz": row["pose"][3:].tolist(),
            },
            "compensated_wrench": row["wrench"].tolist(),
            "per_axis_margin": row["margins"].tolist(),
            "limits": self.limits.tolist(),
            "slack": row["gamma"],
            "qp_status": row["status"],
        }

    # -- recording / replay -----------------------------------------------------
    def trace(self) -> Trace:
        rows = self.rows
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

    def save_recording(self, directory, scenario_dict=None):
        os.makedirs(directory, exist_ok=True)
        with open(os.path.join(directory, "trace.csv"), "w") as f:
            f.write(trace_to_csv(self.trace()))
        with open(os.path.join(directory, "commands.jsonl"), "w") as f:
            for entry in self.command_log:
                f.write(json.dumps(entry) + "\n")
        meta = {
            "schema": PROTOCOL_VERSION,
            "steps": self.step,
            "envelope": self.envelope.tolist(),
        }
        if scenario_dict is not None:
            meta["scenario"] = scenario_dict
        with open(os.path.join(directory, "meta.json"), "w") as f:
            json.dump(meta, f, indent=2)
            f.write("\n")


def replay_recording(directory) -> Trace:
    """Re-run a recorded session from its scenario + command log.

    The replayed trace is byte-identical to the recorded one (same CSV text).
    """
    with open(os.path.join(directory, "meta.json")) as f:
        meta = json.load(f)
    if "scenario" not in meta:
        raise ValueError("recording has no scenario; cannot replay")
    config = config_from_dict(meta["scenario"])
    session = TeleopSession(config, envelope=meta["envelope"])
    commands = []
    with open(os.path.join(directory, "commands.jsonl")) as f:
        for line in f:
            if line.strip():
                commands.append(json.loads(line))
    idx = 0
    for step in range(int(meta["steps"])):
        while idx < len(commands) and commands[idx]["effect_step"] == step:
            entry = commands[idx]
            session.submit(
                entry["client_id"],
                {
                    "type": "command",
                    "v": PROTOCOL_VERSION,
                    "kind": entry["kind"],
                    "payload": entry["payload"],
                    "client_id": entry["client_id"],
                },
            )
            idx += 1
        session.advance_tick()
    return session.trace()


# ---------------------------------------------------------------------------
# Async server layer
# ---------------------------------------------------------------------------

def build_app(session: TeleopSession, turbo=False, record_dir=None, scenario_dict=None):
    """FastAPI app exposing /health and the /ws state+command channel."""
    queues: dict = {}
    saved = {"done": False}

    def _save_once():
        if record_dir and not saved["done"]:
            saved["done"] = True
            session.save_recording(record_dir, scenario_dict=scenario_dict)

    async def tick_loop():
        start = time.perf_counter()
        interval = 1.0 / session.config.control_rate
        k = 0
        try:
            while not session.finished:
                message = session.advance_tick()
                if message is not None:
                    text = json.dumps(message)
                    for q in list(queues.values()):
                        if q.full():
                            try:
                                q.get_nowait()  # drop the oldest; never block the loop
                            except asyncio.QueueEmpty:
                                pass
                        q.put_nowait(text)
                k += 1
                if turbo:
                    await asyncio.sleep(0)
                else:
                    delay = start + k * interval - time.perf_counter()
                    if delay > 0:
                        await asyncio.sleep(delay)
        finally:
            _save_once()

    @asynccontextmanager
    async def lifespan(app):
        task = asyncio.create_task(tick_loop())
        try:
            yield
        finally:
            task.cancel()
            try:
                await task
            except asyncio.CancelledError:
                pass
            _save_once()

    app = FastAPI(lifespan=lifespan)

    @app.get("/health")
    def health():
        return {
            "status": "ok",
            "tick": session.step,
            "clients": len(queues),
            "paused": session.paused,
            "finished": session.finished,
        }

    @app.websocket("/ws")
    async def ws_endpoint(ws: WebSocket):
        await ws.accept()
        conn_id = f"conn-{id(ws)}"
        queue: asyncio.Queue = asyncio.Queue(maxsize=8)
        queues[conn_id] = queue
        used_ids = {conn_id}

        async def sender():
            while True:
                await ws.send_text(await queue.get())

        send_task = asyncio.create_task(sender())
        try:
            await ws.send_text(json.dumps(session.hello_message()))
            while True:
                raw = await ws.receive_text()
                try:
                    try:
                        message = json.loads(raw)
                    except json.JSONDecodeError as exc:
                        raise CommandError(f"not JSON: {exc}") from exc
                    if isinstance(message, dict) and isinstance(message.get("client_id"), str):
                        used_ids.add(message["client_id"])
                    session.submit(conn_id, message)
                except CommandError as exc:
                    await ws.send_text(json.dumps(
                        {"type": "error", "v": PROTOCOL_VERSION, "message": str(exc)}
                    ))
        except WebSocketDisconnect:
            pass
        finally:
            send_task.cancel()
            queues.pop(conn_id, None)
            for cid in used_ids:
                session.drop_client(cid)

    return app


def serve(config: SimConfig, host="127.0.0.1", port=8765, record_dir=None, turbo=False,
          scenario_dict=None, envelope=None):
    """Blocking entry point used by the CLI."""
    import uvicorn

    session = TeleopSession(config, envelope=envelope)
    app = build_app(session, turbo=turbo, record_dir=record_dir, scenario_dict=scenario_dict)
    uvicorn.run(app, host=host, port=port, log_level="warning")
